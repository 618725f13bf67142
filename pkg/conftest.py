# Standard Library
import os

# Django
import django

os.environ.setdefault("DJANGO_SETTINGS_MODULE", "simsite.settings")
django.setup()
