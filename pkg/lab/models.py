from django.db import models

from .normkit import NormKind


class CorrectionRun(models.Model):
    rep = models.CharField(
        max_length=200,
        help_text="Rep selector the run was started from"
    )
    norm = models.CharField(
        max_length=4,
        choices=NormKind.choices,
        default=NormKind.FROBENIUS,
        help_text="Norm the defects are reported in"
    )
    radius = models.PositiveSmallIntegerField(help_text="Window radius")
    seed = models.IntegerField(default=0)
    defect_before = models.FloatField()
    defect_after = models.FloatField()
    residual = models.FloatField(help_text="Least-squares residual of the last coboundary fit")
    beta_norm = models.FloatField()
    iterations = models.PositiveIntegerField(default=0)
    stalled = models.BooleanField(default=False)
    created_at = models.DateTimeField(auto_now_add=True)

    class Meta:
        ordering = ['-created_at']
        indexes = [
            models.Index(fields=['rep'], name='lab_correct_rep_3f1c2a_idx'),
            models.Index(fields=['created_at'], name='lab_correct_created_8d54b0_idx'),
        ]

    def __str__(self):
        return f"{self.rep} ({self.get_norm_display()}): {self.defect_before:.3e} -> {self.defect_after:.3e}"

    def clean(self):
        from django.core.exceptions import ValidationError
        if self.radius is not None and self.radius < 2:
            raise ValidationError("Radius must be at least 2")
        for field in ('defect_before', 'defect_after', 'residual', 'beta_norm'):
            value = getattr(self, field)
            if value is not None and value < 0:
                raise ValidationError(f"{field} must be nonnegative")

    @property
    def gain(self):
        if not self.defect_before:
            return None
        return self.defect_after / self.defect_before
