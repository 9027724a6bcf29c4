"""
Django settings for the pragma_bench project.

The project has no web surface: Django provides configuration, the
management-command CLI and the test runner. Every knob can be set from
the environment (or a .env file next to manage.py).
"""

from pathlib import Path
import os
from dotenv import load_dotenv

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent

# Load environment variables
load_dotenv()


def _optional_int(name):
    value = os.getenv(name)
    return int(value) if value not in (None, '') else None


SECRET_KEY = os.getenv('SECRET_KEY', 'pragma-bench-insecure-local-key')

DEBUG = os.getenv('DEBUG', 'False').lower() == 'true'

ALLOWED_HOSTS = []


# Application definition

INSTALLED_APPS = [
    'core',
]

# Nothing is stored in a database; the entry only keeps Django's checks quiet.
DATABASES = {
    'default': {
        'ENGINE': 'django.db.backends.sqlite3',
        'NAME': BASE_DIR / 'db.sqlite3',
    }
}

LANGUAGE_CODE = 'en-us'

TIME_ZONE = 'UTC'

USE_TZ = True


# LLM configuration (OpenAI-compatible chat completions)
OPENAI_API_KEY = os.getenv('OPENAI_API_KEY')
LLM_BASE_URL = os.getenv('LLM_BASE_URL') or None
LLM_MODEL = os.getenv('LLM_MODEL', 'gpt-4o-2024-05-13')
LLM_TEMPERATURE = float(os.getenv('LLM_TEMPERATURE', '1.0'))
LLM_MAX_ATTEMPTS = int(os.getenv('LLM_MAX_ATTEMPTS', '5'))
LLM_BACKOFF_SECONDS = float(os.getenv('LLM_BACKOFF_SECONDS', '1.0'))
LLM_REQUEST_TIMEOUT = float(os.getenv('LLM_REQUEST_TIMEOUT', '120'))

# Replaces the built-in system message; must stay within 512 characters.
SYSTEM_MESSAGE_OVERRIDE = os.getenv('SYSTEM_MESSAGE_OVERRIDE') or None

# GNATprove configuration
GNATPROVE_BIN = os.getenv('GNATPROVE_BIN', 'gnatprove')
GNATPROVE_MODE = os.getenv('GNATPROVE_MODE', 'all')
GNATPROVE_TIMEOUT = int(os.getenv('GNATPROVE_TIMEOUT', '300'))
GNATPROVE_LEVEL = _optional_int('GNATPROVE_LEVEL')
GNATPROVE_STEPS = _optional_int('GNATPROVE_STEPS')

# Benchmark harness
PRAGMA_BENCH_SCRATCH_DIR = os.getenv('PRAGMA_BENCH_SCRATCH_DIR') or None
PRAGMA_BENCH_OUTPUT_DIR = Path(os.getenv('PRAGMA_BENCH_OUTPUT_DIR', BASE_DIR / 'bench_out'))
PRAGMA_BENCH_FIXTURES = BASE_DIR / 'core' / 'fixtures'


# Logging
LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'verbose': {
            'format': '{asctime} {levelname} {name}: {message}',
            'style': '{',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'formatter': 'verbose',
        },
    },
    'loggers': {
        'core': {
            'handlers': ['console'],
            'level': os.getenv('PRAGMA_BENCH_LOG_LEVEL', 'INFO'),
            'propagate': False,
        },
    },
}
