from django.apps import AppConfig


class InterferometerConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'interferometer'
    verbose_name = 'Two-splitter interferometer with feedback channel'
