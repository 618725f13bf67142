"""App Configuration"""

# Django
from django.apps import AppConfig

# RIS Alloc
from risalloc import __version__


class RisAllocConfig(AppConfig):
    """App Config"""

    name = "risalloc"
    label = "risalloc"
    verbose_name = f"RIS Alloc v{__version__}"
