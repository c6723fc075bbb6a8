"""
Centralized logging configuration for qhelper.

Reports go to stdout, so every console handler here writes to stderr.
"""
import os
import logging
import logging.config
from datetime import datetime
from pathlib import Path
from typing import Dict, Optional, Union
from enum import Enum

LOG_FORMAT = '[%(asctime)s] %(name)s (%(levelname)s): %(message)s'
DATE_FORMAT = '%Y-%m-%dT%H:%M:%S'


class LogLevel(Enum):
    """Levels accepted by set_verbosity"""
    DEBUG = logging.DEBUG
    INFO = logging.INFO
    WARNING = logging.WARNING
    ERROR = logging.ERROR
    CRITICAL = logging.CRITICAL


# -v count on the command line -> console level
VERBOSITY_LEVELS = {0: LogLevel.WARNING, 1: LogLevel.INFO, 2: LogLevel.DEBUG}


class QHelperLogger:
    """Owns the dictConfig for the `qhelper` logger tree"""

    def __init__(self, log_dir: Optional[str] = None):
        self.log_dir = log_dir or os.environ.get('QHELPER_LOG_DIR')
        self.config_applied = False

    def get_logging_config(self, environment: str = 'development') -> Dict:
        """dictConfig for an environment name; QHELPER_LOG_LEVEL overrides the file level"""
        env = environment.lower()
        if env in ('debug', 'test'):
            file_level, console_level = 'DEBUG', 'DEBUG'
        elif env in ('production', 'prod'):
            file_level, console_level = 'INFO', 'ERROR'
        else:
            file_level, console_level = 'INFO', 'WARNING'
        file_level = os.environ.get('QHELPER_LOG_LEVEL', file_level).upper()

        handlers = {
            'stderr': {
                'class': 'logging.StreamHandler',
                'level': console_level,
                'formatter': 'detailed',
                'stream': 'ext://sys.stderr'
            }
        }
        if self.log_dir:
            Path(self.log_dir).mkdir(parents=True, exist_ok=True)
            handlers['file'] = {
                'class': 'logging.handlers.RotatingFileHandler',
                'level': file_level,
                'formatter': 'detailed',
                'filename': os.path.join(self.log_dir, f"qhelper_{datetime.now():%Y%m%d}.log"),
                'maxBytes': 10 * 1024 * 1024,
                'backupCount': 5,
                'encoding': 'utf-8'
            }

        return {
            'version': 1,
            'disable_existing_loggers': False,
            'formatters': {
                'detailed': {'format': LOG_FORMAT, 'datefmt': DATE_FORMAT},
            },
            'handlers': handlers,
            'loggers': {
                'qhelper': {
                    'level': 'DEBUG',
                    'handlers': list(handlers),
                    'propagate': False
                },
                # numpy and scipy RuntimeWarnings
                'py.warnings': {
                    'level': 'WARNING',
                    'handlers': ['stderr'],
                    'propagate': False
                }
            }
        }

    def apply_config(self, environment: Optional[str] = None) -> None:
        environment = environment or os.environ.get('QHELPER_ENV', 'development')
        try:
            logging.config.dictConfig(self.get_logging_config(environment))
            logging.captureWarnings(True)
            self.config_applied = True
            logging.getLogger('qhelper').debug(f"Logging configured for {environment}"
                                               + (f", files in {self.log_dir}" if self.log_dir else ""))
        except (ValueError, OSError) as e:
            # stdout carries reports, never diagnostics
            logging.basicConfig(level=logging.WARNING, format=LOG_FORMAT, datefmt=DATE_FORMAT)
            logging.getLogger('qhelper').warning(f"Failed to configure logging: {e}")

    def get_logger(self, name: str) -> logging.Logger:
        if not self.config_applied:
            self.apply_config()
        return logging.getLogger(name)

    def set_console_level(self, level: Union[str, int, LogLevel]) -> None:
        """Retune the stderr handler only; file logging keeps its level"""
        if isinstance(level, LogLevel):
            numeric = level.value
        elif isinstance(level, int):
            numeric = VERBOSITY_LEVELS[min(max(level, 0), 2)].value
        else:
            numeric = getattr(logging, str(level).upper(), logging.WARNING)
        for handler in logging.getLogger('qhelper').handlers:
            if isinstance(handler, logging.StreamHandler) and not isinstance(handler, logging.FileHandler):
                handler.setLevel(numeric)


_logger_manager = QHelperLogger()


def get_logger(name: str = 'qhelper') -> logging.Logger:
    return _logger_manager.get_logger(name)


def setup_logging(environment: Optional[str] = None) -> None:
    _logger_manager.apply_config(environment)


def set_verbosity(level: Union[str, int, LogLevel]) -> None:
    """-v count, level name or LogLevel"""
    _logger_manager.set_console_level(level)
