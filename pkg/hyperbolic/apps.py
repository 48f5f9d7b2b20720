from django.apps import AppConfig


class HyperbolicConfig(AppConfig):
    default_auto_field = "django.db.models.BigAutoField"
    name = "hyperbolic"
