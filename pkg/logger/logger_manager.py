# logger/logger_manager.py
from typing import Optional
from logger.logger import get_logger
from logger.logger_config import LOGGER_SETTINGS


class LoggerManager:
    """
    Project-wide logger wrapper that ensures a single logger instance across the simulator, the
    solvers and the experiment harness.
    """
    _logger_instance = None
    _init_params = {}

    @classmethod
    def initialize_logger(cls, name: str = LOGGER_SETTINGS['name'],
                          experiment_name: Optional[str] = LOGGER_SETTINGS['experiment_name'],
                          log_level: int = LOGGER_SETTINGS['log_level'],
                          mode: str = LOGGER_SETTINGS['default_mode'],
                          stream_only: bool = LOGGER_SETTINGS['stream_only'],
                          log_file_name: Optional[str] = LOGGER_SETTINGS['log_file_name']):
        if cls._logger_instance is None:
            cls._init_params = {
                'name': name,
                'experiment_name': experiment_name,
                'mode': mode,
                'log_level': log_level,
                'stream_only': stream_only,
                'log_file_name': log_file_name
            }
            cls._logger_instance = get_logger(**cls._init_params)
        return cls._logger_instance

    @classmethod
    def get_logger(cls):
        if cls._logger_instance is None:
            cls.initialize_logger()
        return cls._logger_instance

    @classmethod
    def reinitialize_logger(cls, **overrides):
        """
        Shuts the current logger down and rebuilds it from the original parameters, optionally
        overriding some of them (the CLI switches mode and experiment name this way).
        """
        if not cls._init_params:
            raise RuntimeError("Logger was never initialized. Cannot reinitialize.")
        params = {**cls._init_params, **overrides}
        cls.shutdown_logger()
        cls._init_params = params
        cls._logger_instance = get_logger(**params)
        return cls._logger_instance

    @classmethod
    def shutdown_logger(cls):
        """
        Gracefully closes all handlers and clears the singleton instance.
        """
        if cls._logger_instance:
            logger = cls._logger_instance
            for handler in logger.handlers[:]:
                try:
                    handler.close()
                    logger.removeHandler(handler)
                except Exception as e:
                    logger.warning(f"[LOGGER WARNING] Failed to close handler: {e}")
            cls._logger_instance = None
