import os

import django

os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'pragma_bench.settings')
django.setup()
