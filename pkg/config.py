"""
Configuration settings for the Forest Planning Workbench
"""

import logging
import sys
from typing import Dict, Any

class Config:
    """Application configuration settings"""

    # App metadata
    APP_NAME = "Forest Planning Workbench"
    APP_VERSION = "1.0.0"
    APP_DESCRIPTION = "Age-structured harvest scheduling, majority cycles and entropy measures"

    # Logging configuration
    LOG_LEVEL = 'WARNING'
    LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
    LOG_FILE = 'workbench.log'
    ENABLE_FILE_LOGGING = False

    # Simplex tolerances
    PIVOT_TOL = 1e-9
    RESIDUAL_TOL = 1e-8
    PHASE_ONE_TOL = 1e-8
    MAX_PIVOTS = 200000

    # Planning tolerances
    FEASIBILITY_TOL = 1e-8
    CONSISTENCY_TOL = 1e-7

    # Distribution validation
    PROBABILITY_SUM_TOL = 1e-9

    # Batch runs
    MAX_WORKERS = 4

    # Output
    FLOAT_DECIMALS = 6
    TRAJECTORY_FILE = 'trajectory.csv'
    SUMMARY_FILE = 'summary.json'
    FEASIBILITY_FILE = 'feasibility.json'

    # Scenario file schema
    REQUIRED_KEYS = ['T', 'L', 'l', 'l0', 'S', 'v0', 'gamma', 'Gamma', 'mu', 'eta']
    OPTIONAL_KEYS = ['survival', 'matrix', 'terminal_lo', 'terminal_hi', 'criterion']

    CRITERIA = ['sum', 'uniform']
    DEFAULT_CRITERION = 'sum'

    # Exit codes
    EXIT_OK = 0
    EXIT_PARSE_ERROR = 1
    EXIT_INFEASIBLE = 2
    EXIT_UNBOUNDED = 3

    # Error messages
    ERROR_MESSAGES = {
        'required': "required",
        'length': "expected {} values, got {}",
        'rows': "expected {} rows, got {}",
        'row_length': "stage {} has {} entries, expected {}",
        'negative': "entries must be nonnegative",
        'non_finite': "entries must be finite numbers",
        'not_numeric': "expected a number",
        'not_list': "expected a list of {} numbers",
        'entry_not_numeric': "entries must be numbers",
        'bad_json': "not valid JSON ({} at line {})",
        'probability_sum': "probabilities sum to {:g}",
        'log_base': "logarithm base must be positive and different from 1, got {:g}",
    }

    # Console wording for violations of a replayed policy; other constraints print by name
    VIOLATION_LABELS = {
        'stock': "harvest exceeds stock",
        'nonnegativity': "negative area",
        'harvest_age': "harvest below the minimum harvest age",
        'planting_age': "planting above the maximum planting age",
    }

    @classmethod
    def get_logging_config(cls, level: str = None) -> Dict[str, Any]:
        """Get logging configuration"""
        level = (level or cls.LOG_LEVEL).upper()
        config = {
            'version': 1,
            'disable_existing_loggers': False,
            'formatters': {
                'standard': {
                    'format': cls.LOG_FORMAT
                },
            },
            'handlers': {
                'console': {
                    'level': level,
                    'class': 'logging.StreamHandler',
                    'formatter': 'standard',
                    'stream': 'ext://sys.stderr',
                },
            },
            'loggers': {
                '': {
                    'handlers': ['console'],
                    'level': level,
                    'propagate': False
                }
            }
        }

        if cls.ENABLE_FILE_LOGGING:
            config['handlers']['file'] = {
                'level': level,
                'class': 'logging.FileHandler',
                'filename': cls.LOG_FILE,
                'formatter': 'standard',
            }
            config['loggers']['']['handlers'].append('file')

        return config

    @classmethod
    def validate_config(cls) -> bool:
        """Validate configuration settings"""
        errors = []

        for name in ('PIVOT_TOL', 'RESIDUAL_TOL', 'PHASE_ONE_TOL', 'FEASIBILITY_TOL', 'CONSISTENCY_TOL'):
            value = getattr(cls, name)
            if not 0 < value < 1e-3:
                errors.append(f"{name} must lie in (0, 1e-3), got {value}")

        if cls.MAX_PIVOTS < 1:
            errors.append("MAX_PIVOTS must be positive")

        if cls.MAX_WORKERS < 1:
            errors.append("MAX_WORKERS must be positive")

        if errors:
            for error in errors:
                logging.error(f"Configuration error: {error}")
            return False

        return True

class ErrorHandler:
    """Centralized error handling"""

    @staticmethod
    def exit_code_for(error: Exception) -> int:
        """Map a domain exception onto the CLI exit-code contract"""
        # Imported here so config stays importable without the domain modules
        from modules.forest_model import HarvestExceedsStock, DimensionMismatch
        from modules.planner import InfeasibleScenario, UnboundedModel

        if isinstance(error, InfeasibleScenario):
            return Config.EXIT_INFEASIBLE
        if isinstance(error, UnboundedModel):
            return Config.EXIT_UNBOUNDED
        if isinstance(error, HarvestExceedsStock):
            return Config.EXIT_INFEASIBLE
        if isinstance(error, (DimensionMismatch, ValueError, KeyError, OSError)):
            return Config.EXIT_PARSE_ERROR
        return Config.EXIT_PARSE_ERROR

    @staticmethod
    def handle_cli_error(error: Exception, operation: str = "command") -> int:
        """Report an error on stderr and return its exit code"""
        code = ErrorHandler.exit_code_for(error)
        logging.getLogger(__name__).debug(f"{operation} failed with exit code {code}", exc_info=error)

        if isinstance(error, FileNotFoundError):
            message = f"file not found: {error.filename}"
        elif isinstance(error, PermissionError):
            message = f"permission denied: {error.filename}"
        else:
            message = str(error)

        print(f"❌ {operation}: {message}", file=sys.stderr)
        return code

class ValidationRules:
    """Data validation rules and constraints"""

    @staticmethod
    def validate_numeric_range(value, min_val=None, max_val=None):
        """Validate numeric values within range"""
        if min_val is not None and value < min_val:
            return False
        if max_val is not None and value > max_val:
            return False
        return True
