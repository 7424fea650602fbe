"""pytest wiring: configure Django the way `manage.py test` does."""
import os

import django
from django.test.utils import setup_test_environment

os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'omegalim.settings')
django.setup()
setup_test_environment()
