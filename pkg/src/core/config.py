"""
Gestor de configuración global para la aplicación.
Permite cargar configuraciones desde .env (y desde un archivo JSON opcional)
y acceder a ellas desde cualquier clase.
"""
import os
import json
import logging
from typing import Any, Dict
from dotenv import load_dotenv

FORMATO_LOG = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'


def _env_bool(nombre: str, defecto: bool) -> bool:
    return os.getenv(nombre, str(defecto)).strip().lower() in ('true', '1', 'yes', 'si')


def _env_int(nombre: str, defecto: int) -> int:
    return int(os.getenv(nombre, defecto))


def _env_float(nombre: str, defecto: float) -> float:
    return float(os.getenv(nombre, defecto))


def _secciones_desde_entorno() -> Dict[str, Dict[str, Any]]:
    """Valores por defecto de cada sección, sobrescritos por variables de entorno."""
    return {
        'app': {
            'name': os.getenv('APP_NAME', 'ObjectSeam'),
            'version': os.getenv('APP_VERSION', '1.0.0'),
            'debug': _env_bool('DEBUG', False),
        },
        'alignment': {
            'patch_radius': _env_int('PATCH_RADIUS', 7),
            'max_corners': _env_int('MAX_CORNERS', 500),
            'min_match_score': _env_float('MIN_MATCH_SCORE', 0.7),
            'ransac_iterations': _env_int('RANSAC_ITERATIONS', 2000),
            'ransac_threshold_px': _env_float('RANSAC_THRESHOLD_PX', 3.0),
            'ransac_min_support': _env_int('RANSAC_MIN_SUPPORT', 4),
            'max_canvas_pixels': _env_int('MAX_CANVAS_PIXELS', 64_000_000),
        },
        'saliency': {
            'work_size': _env_int('SALIENCY_WORK_SIZE', 64),
            'blur_sigma': _env_float('SALIENCY_BLUR_SIGMA', 2.5),
            'tau': _env_float('SALIENCY_TAU', 0.5),
            'cleanup': _env_bool('SALIENCY_CLEANUP', True),
            'object_combine': os.getenv('OBJECT_COMBINE', 'union'),
        },
        'optim': {
            'max_epochs': _env_int('OPTIM_EPOCHS', 1000),
            'step': _env_float('OPTIM_STEP', 0.5),
            'tolerance': _env_float('OPTIM_TOLERANCE', 1e-4),
            'window': _env_int('OPTIM_WINDOW', 10),
            'w_comp': _env_float('W_COMP', 1.0),
            'w_excl': _env_float('W_EXCL', 1.0),
            'w_smooth': _env_float('W_SMOOTH', 1.0),
            'w_photo': _env_float('W_PHOTO', 1.0),
            'init': os.getenv('OPTIM_INIT', 'voronoi'),
            'raw_sums': _env_bool('OPTIM_RAW_SUMS', False),
            'roles': os.getenv('OPTIM_ROLES', 'fixed'),
        },
        'harness': {
            'jobs': _env_int('JOBS', 1),
            'output_dir': os.getenv('OUTPUT_DIR', './resultados'),
            'seed': _env_int('SEED', 0),
            'suite_file': os.getenv('SUITE_FILE', './data/suite_default.json'),
        },
        'logging': {
            'level': os.getenv('LOG_LEVEL', 'INFO').upper(),
            'file': os.getenv('LOG_FILE', ''),
        },
    }


class ConfigManager:
    """Singleton para gestión de configuración global."""

    _instance = None
    _config: Dict[str, Any] = {}

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
            cls._instance._load_config()
        return cls._instance

    def _load_config(self):
        """Carga la configuración desde el archivo .env y el entorno."""
        load_dotenv()
        self._config = _secciones_desde_entorno()
        self._setup_logging()

    def _setup_logging(self):
        """Configura el logger raíz con consola y, si se indica, archivo."""
        nivel = getattr(logging, self._config['logging']['level'], logging.INFO)
        archivo = self._config['logging']['file']

        handlers = [logging.StreamHandler()]
        if archivo:
            os.makedirs(os.path.dirname(archivo) or '.', exist_ok=True)
            handlers.append(logging.FileHandler(archivo, encoding='utf-8'))

        logging.basicConfig(level=nivel, format=FORMATO_LOG, handlers=handlers)

    def set_log_level(self, nivel: str) -> None:
        """Cambia el nivel del logger raíz en caliente."""
        nivel = nivel.upper()
        self.set('logging.level', nivel)
        logging.getLogger().setLevel(getattr(logging, nivel, logging.INFO))

    def get(self, key_path: str, default: Any = None) -> Any:
        """
        Obtiene un valor de configuración usando notación de punto.

        Args:
            key_path: Ruta del valor (ej: 'optim.step')
            default: Valor devuelto si la ruta no existe

        Returns:
            El valor de configuración o el valor por defecto
        """
        nodo: Any = self._config
        for parte in key_path.split('.'):
            if not isinstance(nodo, dict) or parte not in nodo:
                return default
            nodo = nodo[parte]
        return nodo

    def set(self, key_path: str, value: Any) -> None:
        """Establece un valor creando las secciones intermedias que falten."""
        *secciones, clave = key_path.split('.')
        nodo = self._config
        for seccion in secciones:
            nodo = nodo.setdefault(seccion, {})
        nodo[clave] = value

    def merge(self, datos: Dict[str, Any], prefijo: str = '') -> None:
        """Mezcla un diccionario anidado sobre la configuración actual."""
        for clave, valor in datos.items():
            ruta = f"{prefijo}.{clave}" if prefijo else clave
            if isinstance(valor, dict):
                self.merge(valor, ruta)
            else:
                self.set(ruta, valor)

    def cargar_archivo(self, ruta: str) -> None:
        """
        Carga un archivo JSON de configuración y lo mezcla con la actual.

        Args:
            ruta: Ruta del archivo JSON (objeto anidado por secciones)

        Raises:
            ConfigurationError: si el archivo no existe o no es un objeto JSON
        """
        from src.errores.excepciones import ConfigurationError

        try:
            with open(ruta, 'r', encoding='utf-8') as f:
                datos = json.load(f)
        except FileNotFoundError:
            raise ConfigurationError(f"Archivo de configuración no encontrado: {ruta}")
        except json.JSONDecodeError as e:
            raise ConfigurationError(f"JSON inválido en {ruta}: {e}")

        if not isinstance(datos, dict):
            raise ConfigurationError(f"El archivo {ruta} debe contener un objeto JSON")

        self.merge(datos)
        logging.getLogger(__name__).info(f"Configuración cargada desde {ruta}")

    def get_all(self) -> dict:
        """Copia profunda de toda la configuración."""
        return json.loads(json.dumps(self._config))

    def reload(self) -> None:
        """Descarta los cambios en memoria y vuelve a leer el entorno."""
        self._load_config()


# Instancia global del gestor de configuración
config = ConfigManager()


def get_config(key_path: str, default: Any = None) -> Any:
    """Función de conveniencia para obtener configuración."""
    return config.get(key_path, default)


def set_config(key_path: str, value: Any) -> None:
    """Función de conveniencia para establecer configuración."""
    config.set(key_path, value)
