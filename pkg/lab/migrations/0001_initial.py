from django.db import migrations, models


class Migration(migrations.Migration):

    initial = True

    dependencies = [
    ]

    operations = [
        migrations.CreateModel(
            name='CorrectionRun',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('rep', models.CharField(help_text='Rep selector the run was started from', max_length=200)),
                ('norm', models.CharField(choices=[('op', 'Operator'), ('frob', 'Frobenius'), ('hs', 'Normalized Hilbert-Schmidt')], default='frob', help_text='Norm the defects are reported in', max_length=4)),
                ('radius', models.PositiveSmallIntegerField(help_text='Window radius')),
                ('seed', models.IntegerField(default=0)),
                ('defect_before', models.FloatField()),
                ('defect_after', models.FloatField()),
                ('residual', models.FloatField(help_text='Least-squares residual of the last coboundary fit')),
                ('beta_norm', models.FloatField()),
                ('iterations', models.PositiveIntegerField(default=0)),
                ('stalled', models.BooleanField(default=False)),
                ('created_at', models.DateTimeField(auto_now_add=True)),
            ],
            options={
                'ordering': ['-created_at'],
                'indexes': [models.Index(fields=['rep'], name='lab_correct_rep_3f1c2a_idx'), models.Index(fields=['created_at'], name='lab_correct_created_8d54b0_idx')],
            },
        ),
    ]
