import re

from django.conf import settings
from rest_framework import serializers

from . import normkit
from .almostrep import AlmostRep
from .examples import EXAMPLES
from .exceptions import LabError
from .groups import Presentation
from .normkit import NormKind

_GEOMETRIC = re.compile(r'^(\d+):(\d+):x(\d+)$')


def parse_sizes(text):
    """Comma-separated integers and geometric ranges ``a:b:xK`` (a, aK, aK^2, ... <= b)."""
    sizes = []
    for item in str(text).split(','):
        item = item.strip()
        if not item:
            continue
        match = _GEOMETRIC.match(item)
        if match:
            start, stop, factor = (int(group) for group in match.groups())
            if start < 1 or factor < 2 or start > stop:
                raise serializers.ValidationError(
                    f"Range {item!r} needs 1 <= a <= b and a factor of at least 2"
                )
            size = start
            while size <= stop:
                sizes.append(size)
                size *= factor
        elif item.isdigit() and int(item) > 0:
            sizes.append(int(item))
        else:
            raise serializers.ValidationError(f"Invalid size {item!r}; expected n or a:b:xK")
    return sizes


class MatrixField(serializers.Field):
    default_error_messages = {
        'invalid': 'Expected {{"dim": k, "entries": [[re, im], ...]}} in row-major order.',
    }

    def to_representation(self, value):
        return normkit.matrix_to_json(value)

    def to_internal_value(self, data):
        if not isinstance(data, dict) or 'dim' not in data or 'entries' not in data:
            self.fail('invalid')
        try:
            return normkit.matrix_from_json(data)
        except (TypeError, ValueError) as error:
            raise serializers.ValidationError(str(error))


class PresentationSerializer(serializers.Serializer):
    """Validated data is a ``Presentation``."""
    name = serializers.CharField(max_length=100)
    generators = serializers.ListField(child=serializers.CharField(), allow_empty=False)
    relators = serializers.ListField(child=serializers.CharField(allow_blank=True))

    def to_representation(self, instance):
        if isinstance(instance, Presentation):
            return {
                'name': instance.name,
                'generators': list(instance.generators),
                'relators': [instance.format(relator) for relator in instance.relators],
            }
        return super().to_representation(instance)

    def validate(self, data):
        try:
            return Presentation.from_text(data['name'], data['generators'], data['relators'])
        except ValueError as error:
            raise serializers.ValidationError(str(error))


class AlmostRepSerializer(serializers.Serializer):
    """Validated data is an ``AlmostRep``."""
    presentation = PresentationSerializer()
    dim = serializers.IntegerField(min_value=1)
    images = serializers.ListField(child=MatrixField())

    def to_representation(self, instance):
        if isinstance(instance, AlmostRep):
            return {
                'presentation': PresentationSerializer(instance.presentation).data,
                'dim': instance.dim,
                'images': [normkit.matrix_to_json(image) for image in instance.images],
            }
        return super().to_representation(instance)

    def validate(self, data):
        presentation = data['presentation']
        if len(data['images']) != presentation.rank:
            raise serializers.ValidationError(
                f"{presentation.name} has {presentation.rank} generators, got {len(data['images'])} images"
            )
        for image in data['images']:
            if image.shape != (data['dim'], data['dim']):
                raise serializers.ValidationError(
                    f"Image of shape {image.shape} does not match dim {data['dim']}"
                )
        try:
            return AlmostRep(presentation, tuple(data['images']))
        except LabError as error:
            raise serializers.ValidationError(str(error))


class RunConfigSerializer(serializers.Serializer):
    COMMANDS = ['sweep', 'verify', 'correct']

    command = serializers.ChoiceField(choices=COMMANDS)
    example = serializers.ChoiceField(choices=sorted(EXAMPLES), required=False, allow_null=True)
    rep = serializers.CharField(required=False, allow_null=True)
    norm = serializers.ChoiceField(choices=NormKind.choices, default=NormKind.FROBENIUS)
    sizes = serializers.CharField(required=False, allow_null=True)
    seed = serializers.IntegerField(min_value=0, default=lambda: settings.ASYMLAB_SEED)
    radius = serializers.IntegerField(default=lambda: settings.ASYMLAB_RADIUS)
    max_iters = serializers.IntegerField(min_value=1, default=lambda: settings.ASYMLAB_MAX_ITERS)
    stall_factor = serializers.FloatField(default=lambda: settings.ASYMLAB_STALL_FACTOR)
    checks = serializers.ListField(child=serializers.CharField(), required=False, default=list)
    trials = serializers.IntegerField(min_value=1, default=lambda: settings.ASYMLAB_VERIFY_TRIALS)
    out = serializers.CharField(required=False, allow_null=True)

    def validate_sizes(self, value):
        if value is None:
            return None
        return parse_sizes(value)

    def validate(self, data):
        command = data['command']
        if command == 'sweep':
            if not data.get('example'):
                raise serializers.ValidationError("sweep needs --example")
            if not data.get('sizes'):
                raise serializers.ValidationError("sweep needs a nonempty --sizes list")
        if command == 'correct':
            if not data.get('rep'):
                raise serializers.ValidationError("correct needs --rep")
            if data['radius'] < 2:
                raise serializers.ValidationError("Radius must be at least 2")
            if not 0 < data['stall_factor'] < 1:
                raise serializers.ValidationError("Stall factor must lie in (0, 1)")
        return data


class CorrectionReportSerializer(serializers.Serializer):
    defect_before = serializers.FloatField(min_value=0)
    defect_after = serializers.FloatField(min_value=0)
    residual = serializers.FloatField(min_value=0)
    beta_norm = serializers.FloatField(min_value=0)
    iterations = serializers.IntegerField(min_value=0)
    stalled = serializers.BooleanField()


class CheckResultSerializer(serializers.Serializer):
    measured = serializers.FloatField(allow_null=True)
    bound = serializers.FloatField(allow_null=True)
    detail = serializers.CharField(required=False, allow_blank=True)

    def get_fields(self):
        # "pass" is a keyword, so it cannot be declared as an attribute
        fields = super().get_fields()
        fields['pass'] = serializers.BooleanField()
        return fields
