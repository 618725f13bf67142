"""
Settings for running the simulator from the command line, in Celery workers
and in the test suite.
"""

# flake8: noqa

# Standard Library
import os

SECRET_KEY = os.environ.get("RIS_SIM_SECRET_KEY", "insecure-key-for-local-simulation-runs")
DEBUG = False
ALLOWED_HOSTS = []

INSTALLED_APPS = [
    "risalloc",
]

# No models; the tests only use SimpleTestCase and never open a connection.
DATABASES = {}

CACHES = {
    "default": {
        "BACKEND": "django.core.cache.backends.locmem.LocMemCache",
    }
}

USE_TZ = True
TIME_ZONE = "UTC"

# Celery configuration
CELERY_BROKER_URL = os.environ.get("RIS_SIM_BROKER_URL", "redis://localhost:6379/0")
CELERY_RESULT_BACKEND = os.environ.get("RIS_SIM_RESULT_BACKEND", "redis://localhost:6379/1")
CELERY_TASK_SERIALIZER = "json"
CELERY_RESULT_SERIALIZER = "json"
CELERY_ACCEPT_CONTENT = ["json"]

LOGGING_CONFIG = None

#######################################
# Simulator settings                  #
#######################################

RIS_SIM_USE_CELERY = os.environ.get("RIS_SIM_USE_CELERY", "") == "1"
RIS_SIM_OUTPUT_DIR = os.environ.get("RIS_SIM_OUTPUT_DIR", "ris_sim_output")
