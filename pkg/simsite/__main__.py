"""
Console entry point.

``ris-sim sweep-power --trials 100`` is shorthand for
``django-admin ris_sim sweep-power --trials 100`` under ``simsite.settings``.
``python -m simsite <command>`` runs any management command.
"""

# Standard Library
import os
import sys


def _execute(argv):
    os.environ.setdefault("DJANGO_SETTINGS_MODULE", "simsite.settings")

    # Django
    from django.core.management import execute_from_command_line

    execute_from_command_line(argv)


def main():
    _execute([sys.argv[0], "ris_sim", *sys.argv[1:]])


if __name__ == "__main__":
    _execute(sys.argv)
