from rest_framework import serializers

from core.serializers import ComplexField, ComplexMatrixField, square_matrix

from .models import HartzData, MultiplierSymbol


class HartzDataSerializer(serializers.Serializer):
    """HartzData JSON: {"n": int, "E": [[[re, im], ...], ...]} with E of size (n-1) x (n-1)"""

    n = serializers.IntegerField(min_value=2)
    E = ComplexMatrixField()

    def validate(self, attrs):
        attrs['E'] = square_matrix(attrs['E'], attrs['n'] - 1, name='E')
        return attrs

    def create(self, validated_data):
        return HartzData(validated_data['E'])

    def to_representation(self, instance):
        field = ComplexField()
        return {
            'n': instance.n,
            'E': [[field.to_representation(v) for v in row] for row in instance.E],
        }


class MultiplierSymbolSerializer(serializers.Serializer):
    """Symbol JSON: {"values": [[re, im], ...]}"""

    values = serializers.ListField(child=ComplexField(), allow_empty=False)

    def create(self, validated_data):
        return MultiplierSymbol(validated_data['values'])

    def to_representation(self, instance):
        field = ComplexField()
        return {'values': [field.to_representation(v) for v in instance.values]}
