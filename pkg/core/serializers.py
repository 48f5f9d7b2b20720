import math

import numpy as np
from rest_framework import serializers

from .exceptions import PickSpaceError
from .services import validate_gram


class ComplexField(serializers.Field):
    """A complex number written as the pair [re, im]."""

    default_error_messages = {
        'invalid': 'Expected a complex number as [re, im].',
        'not_finite': 'Complex entries must be finite.',
    }

    def to_internal_value(self, data):
        if isinstance(data, (int, float)) and not isinstance(data, bool):
            value = complex(data, 0.0)
        elif isinstance(data, (list, tuple)) and len(data) == 2:
            try:
                value = complex(float(data[0]), float(data[1]))
            except (TypeError, ValueError):
                self.fail('invalid')
        else:
            self.fail('invalid')
        if not (math.isfinite(value.real) and math.isfinite(value.imag)):
            self.fail('not_finite')
        return value

    def to_representation(self, value):
        value = complex(value)
        return [float(value.real), float(value.imag)]


class ComplexMatrixField(serializers.ListField):
    child = serializers.ListField(child=ComplexField())


def square_matrix(rows, n, name='K'):
    if len(rows) != n or any(len(row) != n for row in rows):
        raise serializers.ValidationError({name: f"expected a {n}x{n} matrix"})
    return np.array(rows, dtype=complex).reshape(n, n)


class GramSerializer(serializers.Serializer):
    """Gram JSON: {"n": int, "K": [[[re, im], ...], ...], "labels": [...]}"""

    n = serializers.IntegerField(min_value=1)
    K = ComplexMatrixField()
    labels = serializers.ListField(child=serializers.CharField(), required=False, allow_null=True)

    def validate(self, attrs):
        attrs['K'] = square_matrix(attrs['K'], attrs['n'])
        labels = attrs.get('labels')
        if labels is not None and len(labels) != attrs['n']:
            raise serializers.ValidationError({'labels': f"expected {attrs['n']} labels"})
        return attrs

    def create(self, validated_data):
        return validate_gram(
            validated_data['K'],
            self.context.get('tol'),
            labels=validated_data.get('labels'),
        )

    def to_representation(self, instance):
        return {
            'n': instance.n,
            'K': [[ComplexField().to_representation(v) for v in row] for row in instance.K],
            'labels': list(instance.labels) if instance.labels else None,
        }


def load_gram(payload, tol=None):
    """Validate a Gram JSON document and build the GramSpace."""
    serializer = GramSerializer(data=payload, context={'tol': tol})
    serializer.is_valid(raise_exception=True)
    return serializer.save()


def jsonable(value):
    """Convert numpy scalars, arrays and complex numbers into JSON-ready values."""
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return [jsonable(v) for v in value.tolist()]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (complex, np.complexfloating)):
        return ComplexField().to_representation(value)
    if isinstance(value, (float, np.floating)):
        return float(value)
    if isinstance(value, PickSpaceError):
        return jsonable(value.as_dict())
    return value
