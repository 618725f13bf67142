"""
Celery config
"""

# Standard Library
import os

# Third Party
from celery import Celery

# set the default Django settings module for the 'celery' program.
os.environ.setdefault("DJANGO_SETTINGS_MODULE", "simsite.settings")

# Django
from django.conf import settings  # noqa: E402

app = Celery("simsite")

# Using a string here means the worker doesn't have to serialize
# the configuration object to child processes.
app.config_from_object("django.conf:settings", namespace="CELERY")

# Automatically try to establish the connection to the broker on
# Celery startup if it is unavailable.
app.conf.broker_connection_retry_on_startup = True

app.conf.task_default_priority = 5
app.conf.worker_prefetch_multiplier = 1  # trials are long; a worker takes one at a time

# Load task modules from all registered Django app configs.
app.autodiscover_tasks(lambda: settings.INSTALLED_APPS)
