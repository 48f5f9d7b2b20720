"""
Django settings for the pickspace project.

Only the settings, command and logging layers of Django are used; there is no
database, no URL routing and no template rendering.
"""

from pathlib import Path

from decouple import config

BASE_DIR = Path(__file__).resolve().parent.parent

# SECURITY WARNING: keep the secret key used in production secret!
SECRET_KEY = config('SECRET_KEY', default='pickspace-insecure-local-key')

DEBUG = config('DEBUG', default=False, cast=bool)

ALLOWED_HOSTS: list[str] = []

# Application definition
INSTALLED_APPS = [
    'rest_framework',
    'core',
    'invariants',
    'hyperbolic',
    'embedding',
    'classify',
    'duality',
    'trees',
    'multalg',
]

DATABASES: dict = {}

LANGUAGE_CODE = 'en-us'
TIME_ZONE = 'UTC'
USE_I18N = False
USE_TZ = True

DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'

# --- Numerical tolerances ---
PICKSPACE = {
    'TOL_EQ': config('PICKSPACE_TOL_EQ', default=1e-8, cast=float),
    'TOL_PSD': config('PICKSPACE_TOL_PSD', default=1e-10, cast=float),
    'TOL_ZERO': config('PICKSPACE_TOL_ZERO', default=1e-12, cast=float),
    'TOL_RANK': config('PICKSPACE_TOL_RANK', default=1e-10, cast=float),
    'TOL_CLASS': config('PICKSPACE_TOL_CLASS', default=1e-7, cast=float),
}

# --- Celery Configuration ---
# Batch analysis runs one task per input file. Without a broker the tasks run
# eagerly inside the calling process.
CELERY_BROKER_URL = config('CELERY_BROKER_URL', default='memory://')
CELERY_RESULT_BACKEND = config('CELERY_RESULT_BACKEND', default='cache+memory://')
CELERY_TASK_ALWAYS_EAGER = config('CELERY_TASK_ALWAYS_EAGER', default=True, cast=bool)
CELERY_TASK_EAGER_PROPAGATES = True
CELERY_ACCEPT_CONTENT = ['json']
CELERY_TASK_SERIALIZER = 'json'
CELERY_RESULT_SERIALIZER = 'json'
CELERY_TIMEZONE = 'UTC'
CELERY_ENABLE_UTC = True
CELERY_TASK_ROUTES = {
    'invariants.tasks.*': {'queue': 'analysis'},
}
CELERY_WORKER_PREFETCH_MULTIPLIER = 1
CELERY_TASK_ACKS_LATE = True

# Optional: Sentry for error tracking
SENTRY_DSN = config('SENTRY_DSN', default='')
if SENTRY_DSN:
    import sentry_sdk
    from sentry_sdk.integrations.celery import CeleryIntegration
    from sentry_sdk.integrations.django import DjangoIntegration

    sentry_sdk.init(
        dsn=SENTRY_DSN,
        integrations=[
            DjangoIntegration(),
            CeleryIntegration(),
        ],
        traces_sample_rate=config('SENTRY_TRACES_SAMPLE_RATE', default=0.0, cast=float),
        send_default_pii=False,
    )

# Logging configuration
PICKSPACE_LOG_LEVEL = config('PICKSPACE_LOG_LEVEL', default='INFO')
PICKSPACE_LOG_FILE = config('PICKSPACE_LOG_FILE', default='')

_handlers = ['console', 'file'] if PICKSPACE_LOG_FILE else ['console']

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'verbose': {
            'format': '{levelname} {asctime} {module} {process:d} {thread:d} {message}',
            'style': '{',
        },
        'simple': {
            'format': '{levelname} {message}',
            'style': '{',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'formatter': 'verbose',
        },
        **(
            {
                'file': {
                    'class': 'logging.FileHandler',
                    'filename': PICKSPACE_LOG_FILE,
                    'formatter': 'verbose',
                }
            }
            if PICKSPACE_LOG_FILE
            else {}
        ),
    },
    'root': {
        'handlers': ['console'],
        'level': 'WARNING',
    },
    'loggers': {
        'django': {
            'handlers': _handlers,
            'level': config('DJANGO_LOG_LEVEL', default='WARNING'),
            'propagate': False,
        },
        'celery': {
            'handlers': _handlers,
            'level': config('CELERY_LOG_LEVEL', default='WARNING'),
            'propagate': False,
        },
        **{
            app: {
                'handlers': _handlers,
                'level': PICKSPACE_LOG_LEVEL,
                'propagate': False,
            }
            for app in (
                'core',
                'invariants',
                'hyperbolic',
                'embedding',
                'classify',
                'duality',
                'trees',
                'multalg',
            )
        },
    },
}
