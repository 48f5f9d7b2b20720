from rest_framework import serializers

from core.serializers import ComplexField, ComplexMatrixField

from .models import PointSet


class PointSetSerializer(serializers.Serializer):
    """PointSet JSON: {"d": int, "points": [[[re, im], ... d entries], ...]}"""

    d = serializers.IntegerField(min_value=1)
    points = ComplexMatrixField(allow_empty=False)

    def validate(self, attrs):
        d = attrs['d']
        bad = [i for i, p in enumerate(attrs['points']) if len(p) != d]
        if bad:
            raise serializers.ValidationError(
                {'points': f"point {bad[0] + 1} does not have {d} coordinates"}
            )
        return attrs

    def create(self, validated_data):
        return PointSet(validated_data['points'])

    def to_representation(self, instance):
        field = ComplexField()
        return {
            'd': instance.d,
            'points': [[field.to_representation(v) for v in row] for row in instance.points],
        }


def load_points(payload) -> PointSet:
    serializer = PointSetSerializer(data=payload)
    serializer.is_valid(raise_exception=True)
    return serializer.save()
