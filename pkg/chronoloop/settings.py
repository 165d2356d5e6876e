import os
from decouple import config
from pathlib import Path

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent

# SECURITY WARNING: keep the secret key used in production secret!
SECRET_KEY = config('SECRET_KEY', default='django-insecure-chronoloop-local-key')

DEBUG = config('DEBUG', default=False, cast=bool)

ALLOWED_HOSTS = []

# Application definition
INSTALLED_APPS = [
    'django.contrib.contenttypes',
    'django.contrib.auth',
    'rest_framework',
    'interferometer',
]

# Nothing is persisted; the database only satisfies the framework.
DATABASES = {
    'default': {
        'ENGINE': 'django.db.backends.sqlite3',
        'NAME': config('DB_NAME', default=str(BASE_DIR / 'chronoloop.sqlite3')),
    }
}

# Internationalization
LANGUAGE_CODE = 'en-us'
TIME_ZONE = 'UTC'
USE_I18N = False
USE_TZ = True

DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'

# REST Framework settings
REST_FRAMEWORK = {
    'DEFAULT_RENDERER_CLASSES': [
        'rest_framework.renderers.JSONRenderer',
    ],
    'DEFAULT_PARSER_CLASSES': [
        'rest_framework.parsers.JSONParser',
    ],
    'STRICT_JSON': True,
}

# Celery settings
# Eager by default: Monte Carlo blocks run in-process unless a broker is configured.
CELERY_BROKER_URL = config('CELERY_BROKER_URL', default='redis://localhost:6379/0')
CELERY_RESULT_BACKEND = config('CELERY_RESULT_BACKEND', default='redis://localhost:6379/0')
CELERY_TASK_ALWAYS_EAGER = config('CELERY_TASK_ALWAYS_EAGER', default=True, cast=bool)
CELERY_TASK_EAGER_PROPAGATES = True
CELERY_ACCEPT_CONTENT = ['json']
CELERY_TASK_SERIALIZER = 'json'
CELERY_RESULT_SERIALIZER = 'json'
# Blocks are long; a worker takes one at a time.
CELERY_WORKER_PREFETCH_MULTIPLIER = 1

# Simulator settings
CHRONOLOOP_THREADS = config('CHRONOLOOP_THREADS', default=1, cast=int)
CHRONOLOOP_COND_LIMIT = config('CHRONOLOOP_COND_LIMIT', default=1e12, cast=float)
CHRONOLOOP_UNITARY_TOL = config('CHRONOLOOP_UNITARY_TOL', default=1e-12, cast=float)

# Data files path
DATA_FILES_PATH = os.path.join(BASE_DIR, 'data')
CHRONOLOOP_DEFAULT_CONFIG = config(
    'CHRONOLOOP_DEFAULT_CONFIG',
    default=os.path.join(DATA_FILES_PATH, 'qtltt_default.json'),
)

# Logging goes to stderr; stdout is reserved for reports.
LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'plain': {
            'format': '%(asctime)s %(levelname)s %(name)s: %(message)s',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'stream': 'ext://sys.stderr',
            'formatter': 'plain',
        },
    },
    'loggers': {
        'interferometer': {
            'handlers': ['console'],
            'level': config('CHRONOLOOP_LOG_LEVEL', default='WARNING'),
            'propagate': False,
        },
    },
}
