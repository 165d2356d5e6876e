"""Celery application for Monte Carlo trial blocks.

With ``CELERY_TASK_ALWAYS_EAGER`` (the default) blocks run in the calling
process. Point ``CELERY_BROKER_URL`` at redis and start
``celery -A chronoloop worker`` to spread them over workers.
"""
import os

from celery import Celery

os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'chronoloop.settings')

app = Celery('chronoloop')
app.config_from_object('django.conf:settings', namespace='CELERY')
app.autodiscover_tasks(['interferometer'])
