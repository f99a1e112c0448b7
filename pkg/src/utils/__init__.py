"""Utils module initialization."""