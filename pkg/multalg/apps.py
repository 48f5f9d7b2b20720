from django.apps import AppConfig


class MultalgConfig(AppConfig):
    default_auto_field = "django.db.models.BigAutoField"
    name = "multalg"
