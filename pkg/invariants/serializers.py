import itertools
import math

from rest_framework import serializers

from .models import DeltaData, InvariantData


def index_key(indices) -> str:
    """0-based index tuple -> the 1-based "i,j" key used in JSON"""
    return ','.join(str(i + 1) for i in indices)


def parse_key(key: str, size: int) -> tuple[int, ...]:
    try:
        parts = tuple(int(p) - 1 for p in key.split(','))
    except ValueError as e:
        raise serializers.ValidationError(f"malformed index key {key!r}") from e
    if len(parts) != size or min(parts) < 0:
        raise serializers.ValidationError(f"malformed index key {key!r}")
    return parts


class InvariantDataSerializer(serializers.Serializer):
    """InvariantData JSON: {"n": int, "deltas": {"i,j": x}, "angulars": {"1,r,s": x}}"""

    n = serializers.IntegerField(min_value=1)
    deltas = serializers.DictField(child=serializers.FloatField())
    angulars = serializers.DictField(child=serializers.FloatField(), required=False, default=dict)

    def validate(self, attrs):
        n = attrs['n']
        deltas = {parse_key(k, 2): v for k, v in attrs['deltas'].items()}
        angulars = {parse_key(k, 3): v for k, v in attrs['angulars'].items()}

        expected_pairs = set(itertools.combinations(range(n), 2))
        expected_triples = {(0, r, s) for r, s in itertools.combinations(range(1, n), 2)}
        if set(deltas) != expected_pairs:
            raise serializers.ValidationError({'deltas': f"expected every pair i<j of 1..{n}"})
        if set(angulars) != expected_triples:
            raise serializers.ValidationError({'angulars': f"expected every triple 1,r,s with 1<r<s<={n}"})
        if any(not (0.0 < v < 1.0) for v in deltas.values()):
            raise serializers.ValidationError({'deltas': 'every delta must lie in (0, 1)'})
        if any(abs(v) > math.pi for v in angulars.values()):
            raise serializers.ValidationError({'angulars': 'angular invariants lie in (-pi, pi]'})
        attrs['deltas'] = deltas
        attrs['angulars'] = angulars
        return attrs

    def create(self, validated_data):
        return InvariantData(**validated_data)

    def to_representation(self, instance):
        return {
            'n': instance.n,
            'deltas': {index_key(k): v for k, v in sorted(instance.deltas.items())},
            'angulars': {index_key(k): v for k, v in sorted(instance.angulars.items())},
        }


class DeltaDataSerializer(serializers.Serializer):
    def to_representation(self, instance: DeltaData):
        return {
            'n': instance.n,
            'deltas': {index_key(k): v for k, v in sorted(instance.deltas.items())},
            'capital_deltas': {
                f"{x + 1};{y + 1},{z + 1}": v
                for (x, y, z), v in sorted(instance.capital_deltas.items())
            },
        }
