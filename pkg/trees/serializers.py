from rest_framework import serializers

from .models import RootedTree, TreeWeight


class TreeSerializer(serializers.Serializer):
    """Tree JSON: {"parent": [-1, p1, ...], "edge_len": [...], "omega": [...]}.

    Parent entries are 0-based vertex indices; the root has parent -1.
    ``edge_len`` defaults to 1 on every edge and ``omega`` is optional.
    """

    parent = serializers.ListField(child=serializers.IntegerField(min_value=-1), allow_empty=False)
    edge_len = serializers.ListField(child=serializers.FloatField(), required=False, allow_null=True)
    omega = serializers.ListField(child=serializers.FloatField(), required=False, allow_null=True)

    def validate(self, attrs):
        V = len(attrs['parent'])
        for name in ('edge_len', 'omega'):
            values = attrs.get(name)
            if values is not None and len(values) != V:
                raise serializers.ValidationError({name: f"expected {V} entries"})
        return attrs

    def create(self, validated_data):
        edge_len = validated_data.get('edge_len')
        tree = RootedTree(
            parent=tuple(validated_data['parent']),
            edge_len=tuple(edge_len) if edge_len is not None else None,
        )
        omega = validated_data.get('omega')
        weight = TreeWeight(omega) if omega is not None else None
        if weight is not None:
            weight.check(tree)
        return tree, weight

    def to_representation(self, instance):
        tree, weight = instance
        return {
            'parent': list(tree.parent),
            'edge_len': list(tree.edge_len),
            'omega': [float(w) for w in weight.omega_big] if weight is not None else None,
        }


def load_tree(payload):
    """Validate a Tree JSON document; returns (RootedTree, TreeWeight or None)."""
    serializer = TreeSerializer(data=payload)
    serializer.is_valid(raise_exception=True)
    return serializer.save()
