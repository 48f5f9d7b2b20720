from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from django.db import models
from django.utils.translation import gettext_lazy as _


class ConfigTag(models.TextChoices):
    GEODESIC = 'Geodesic', _('Geodesic')
    REAL_GEODESIC_DISK = 'RealGeodesicDisk', _('Real geodesic disk')
    RIGHT_ANGLE_AT_FIRST = 'RightAngleAtFirst', _('Right angle at the first point')
    RIGHT_ANGLE_AT_SECOND = 'RightAngleAtSecond', _('Right angle at the second point')
    COMPLEX_GEODESIC = 'ComplexGeodesic', _('Complex geodesic')
    GENERIC = 'Generic', _('Generic')


@dataclass(frozen=True)
class ConfigClass:
    """Geometric class of a triple together with the residuals that decided it"""

    tag: ConfigTag
    witnesses: dict[str, float] = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {'tag': self.tag.value, 'witnesses': dict(sorted(self.witnesses.items()))}


@dataclass(frozen=True)
class ConfigSurvey:
    """Classes of every increasing triple of a configuration"""

    classes: dict[tuple[int, int, int], ConfigClass]

    @property
    def counts(self) -> Counter:
        return Counter(c.tag.value for c in self.classes.values())

    def as_dict(self) -> dict:
        return {
            'counts': dict(sorted(self.counts.items())),
            'triples': {
                ','.join(str(i + 1) for i in key): value.as_dict()
                for key, value in sorted(self.classes.items())
            },
        }
