from dataclasses import replace

from echo_imager import settings
from echo_imager.base import fields
from echo_imager.base.exceptions import ValidationError
from echo_imager.base.models import ConfigModel
from echo_imager.fisher.bounds import TASKS
from echo_imager.protocols.probes import PROBE_KINDS, SECTORS, NoiseConfig, ProbeConfig
from echo_imager.scene.modes import ModeBasis
from echo_imager.scene.scene import Scene


STRATEGIES = ('direct', 'spade', 'echo')
RUN_KINDS = ('rayleigh_sweep', 'mle', 'noise_matrix', 'table1')
DEFAULT_D_GRID = [0.01, 0.02, 0.04, 0.08, 0.1]


class SceneConfig(ConfigModel):
    separation = fields.FloatType(default=0.1, min_value=0.)
    positions = fields.ListType(fields.FloatType)
    weights = fields.ListType(fields.FloatType(min_value=0.))
    brightness = fields.FloatType(default=0.01, min_value=0.)
    absorption_rate = fields.FloatType(default=0., min_value=0.)
    correlation = fields.FloatType(default=0., min_value=0., max_value=1.)
    sigma = fields.FloatType(default=1.)
    centroid_known = fields.BooleanType(default=True)

    def validate_weights(self, data, value):
        if value and len(value) != len(data.get('positions') or []):
            raise ValidationError('one weight per position is required')
        return value

    def to_scene(self):
        """Scene in units of sigma; explicit positions are physical."""
        if self.positions:
            weights = self.weights or None
            return Scene.from_physical(self.positions, self.sigma, weights,
                                       brightness=self.brightness,
                                       absorption_rate=self.absorption_rate,
                                       correlation=self.correlation,
                                       centroid_known=self.centroid_known)
        scene = Scene.two_point(self.separation, self.brightness, self.absorption_rate,
                                self.correlation, self.sigma)
        return scene if self.centroid_known else replace(scene, centroid_known=False)


class ProbeSettings(ConfigModel):
    kind = fields.StringType(default='vacuum', choices=PROBE_KINDS)
    squeeze_r = fields.ListType(fields.FloatType(min_value=0.), default=lambda: [1.])
    fock_n = fields.ListType(fields.IntType(min_value=0), default=lambda: [1])
    coherent_amp = fields.ListType(fields.ComplexType, default=lambda: [0j])

    def to_probe(self):
        return ProbeConfig(self.kind, tuple(self.squeeze_r), tuple(self.fock_n), tuple(self.coherent_amp))


class NoiseSettings(ConfigModel):
    kappa_loss = fields.FloatType(default=0., min_value=0.)
    kappa_heat = fields.FloatType(default=0., min_value=0.)
    kappa_agn = fields.FloatType(default=0., min_value=0.)
    sector = fields.StringType(default='signal', choices=SECTORS)
    force = fields.BooleanType(default=False)

    def to_noise(self):
        return NoiseConfig(self.kappa_loss, self.kappa_heat, self.kappa_agn, self.sector, self.force)


class MeasurementConfig(ConfigModel):
    strategy = fields.StringType(default='spade', choices=STRATEGIES)
    truncation = fields.IntType(default=6, min_value=1)
    pixels_per_sigma = fields.IntType(default=20, min_value=1)
    d_grid = fields.ListType(fields.FloatType(min_value=0.), default=lambda: list(DEFAULT_D_GRID))

    def basis(self, sigma=1.):
        return ModeBasis.hermite_gauss(sigma, self.truncation)


class RunConfig(ConfigModel):
    kind = fields.StringType(default='rayleigh_sweep', choices=RUN_KINDS)
    trials = fields.IntType(default=10 ** 7, min_value=1)
    seed = fields.IntType(default=0, min_value=0)
    replications = fields.IntType(default=settings.REPLICATIONS, min_value=0)
    threads = fields.IntType(default=settings.THREADS, min_value=1)
    output = fields.StringType(default=settings.OUTPUT_DIR)
    n_s = fields.ListType(fields.FloatType(min_value=0.), default=lambda: [1., 4.])
    rates = fields.ListType(fields.FloatType(min_value=0.), default=lambda: [0.01, 0.05])
    task = fields.StringType(default='subdiff_fluor', choices=TASKS)
    oracle = fields.BooleanType(default=True)


class ScenarioConfig(ConfigModel):
    """
    One experiment: the scene, how it is probed and measured, and how the run
    is sampled and written out. Every section may be omitted.
    """
    schema_version = fields.IntType(default=settings.SCHEMA_VERSION)
    scene = fields.ModelType(SceneConfig, default=SceneConfig)
    probe = fields.ModelType(ProbeSettings, default=ProbeSettings)
    noise = fields.ModelType(NoiseSettings, default=NoiseSettings)
    measurement = fields.ModelType(MeasurementConfig, default=MeasurementConfig)
    run = fields.ModelType(RunConfig, default=RunConfig)

    def validate_schema_version(self, data, value):
        if value != settings.SCHEMA_VERSION:
            raise ValidationError(f'unsupported schema version {value}; expected {settings.SCHEMA_VERSION}')
        return value
