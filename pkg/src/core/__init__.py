"""Core module initialization."""