from echo_imager import settings


class BasePrecondition:
    message = 'Precondition not met'
    field = ''

    def check(self, config):
        return True


class PositiveWidth(BasePrecondition):
    message = 'PSF width must be positive'
    field = 'scene.sigma'

    def check(self, config):
        return config.scene.sigma > 0


class PerturbativeBrightness(BasePrecondition):
    message = 'brightness and absorption rate must stay below %s' % settings.BRIGHTNESS_WARN
    field = 'scene.brightness'

    def check(self, config):
        scene = config.scene
        return (scene.brightness < settings.BRIGHTNESS_WARN
                and scene.absorption_rate < settings.BRIGHTNESS_WARN)


class NoiseBound(BasePrecondition):
    message = 'noise rates must stay below %s' % settings.PERTURBATIVE_WARN
    field = 'noise'

    def check(self, config):
        noise = config.noise
        if noise is None or noise.force:
            return True
        rates = [noise.kappa_loss, noise.kappa_heat, noise.kappa_agn]
        return all(rate < settings.PERTURBATIVE_WARN for rate in rates)


class ProbeConsistency(BasePrecondition):
    message = 'per-mode probe parameters must match the basis truncation'
    field = 'probe'

    def check(self, config):
        probe = config.probe
        modes = config.measurement.truncation
        for values in (probe.squeeze_r, probe.fock_n, probe.coherent_amp):
            if values and len(values) not in (1, modes):
                return False
        return True


DEFAULT_PRECONDITIONS = [PositiveWidth, PerturbativeBrightness, NoiseBound, ProbeConsistency]
