"""Equivalent-circuit parameter recovery from impedance spectra.

Fits the motional branch (L, C, R) of the parallel-resonator network in
:mod:`tpadlab.circuit` to measured complex impedance points.  The static
capacitance C0 is treated as known and held fixed (an option unlocks it).

The objective is a log-complex least squares: for each point the
residual is log|Z_model/Z_meas| plus j*angle(Z_model/Z_meas), and the
cost is the sum of squared real and imaginary residual parts.  Working
in log magnitude keeps the parallel-resonance peak (impedance orders of
magnitude above the dip) from dominating the fit.  Minimization is a
damped Gauss-Newton (Levenberg-Marquardt) iteration over the logarithms
of the parameters, which enforces positivity without constraints.
"""

from __future__ import annotations

import cmath
import csv
import math
from dataclasses import dataclass

import numpy as np

from .circuit import BvdParams, impedance, resonant_frequency
from .errors import (
    FitNotConverged,
    InvalidProperty,
    MalformedSpectrumFile,
    NoResonanceFound,
)

MIN_POINTS = 8

SPECTRUM_CSV_HEADER = ("frequency_hz", "magnitude_ohm", "phase_deg")


@dataclass(frozen=True, eq=False)
class ImpedanceSpectrum:
    """Frequency-indexed complex impedance measurements.

    Attributes:
        frequencies: strictly increasing sample frequencies (Hz).
        impedances: complex impedance at each frequency (Ohm).
    """

    frequencies: np.ndarray  # Hz
    impedances: np.ndarray  # complex Ohm

    def __post_init__(self):
        f = np.array(self.frequencies, dtype=float)
        z = np.array(self.impedances, dtype=complex)
        if f.ndim != 1 or z.ndim != 1 or f.shape != z.shape:
            raise InvalidProperty("spectrum needs matching 1-d frequency and impedance arrays")
        if f.size < MIN_POINTS:
            raise InvalidProperty(f"spectrum needs at least {MIN_POINTS} points, got {f.size}")
        if not np.all(np.isfinite(f)) or not np.all(np.isfinite(z)):
            raise InvalidProperty("spectrum contains non-finite values")
        if not np.all(np.diff(f) > 0):
            raise InvalidProperty("spectrum frequencies must be strictly increasing")
        if not (f[0] > 0 and np.all(np.abs(z) > 0)):
            raise InvalidProperty("spectrum frequencies and impedance magnitudes must be positive")
        f.setflags(write=False)
        z.setflags(write=False)
        object.__setattr__(self, "frequencies", f)
        object.__setattr__(self, "impedances", z)

    def __len__(self) -> int:
        return int(self.frequencies.size)

    @property
    def points(self) -> list[tuple[float, complex]]:
        return [(float(f), complex(z)) for f, z in zip(self.frequencies, self.impedances)]

    @classmethod
    def from_points(cls, points) -> "ImpedanceSpectrum":
        """Build a spectrum from (frequency, impedance) pairs in any order."""
        ordered = sorted(points, key=lambda p: p[0])
        return cls(
            frequencies=np.array([p[0] for p in ordered], dtype=float),
            impedances=np.array([p[1] for p in ordered], dtype=complex),
        )


@dataclass(frozen=True)
class FitResult:
    """Outcome of one least-squares refinement.

    Attributes:
        params: fitted circuit parameters.
        residual_norm: objective value at ``params`` (see :func:`residual`).
        iterations: accepted Gauss-Newton steps taken.
        converged: whether a convergence criterion was met.
    """

    params: BvdParams
    residual_norm: float
    iterations: int
    converged: bool


@dataclass(frozen=True)
class FitOptions:
    """Knobs for :func:`fit_bvd`.

    Attributes:
        max_iterations: iteration cap before FitNotConverged.
        step_tolerance: converged when the largest log-parameter step
            (i.e. relative parameter step) falls below this.
        residual_tolerance: converged when the relative cost improvement
            of an accepted step falls below this.
        fit_static_capacitance: unlock C0 as a fourth parameter.
        shunt_resistance: when set, a series resistance added to the
            model (for spectra derived end-to-end through the shunt).
        initial: explicit starting point; default is
            :func:`initial_guess` on the spectrum.
    """

    max_iterations: int = 500
    step_tolerance: float = 1e-10
    residual_tolerance: float = 1e-12
    fit_static_capacitance: bool = False
    shunt_resistance: float = 0.0
    initial: BvdParams | None = None


def model_impedance(params: BvdParams, frequencies, shunt_resistance: float = 0.0):
    """Network impedance at ``frequencies``, plus an optional series shunt."""
    return impedance(params, frequencies) + shunt_resistance


def _log_residual(params: BvdParams, spectrum: ImpedanceSpectrum, shunt: float) -> np.ndarray:
    ratio = model_impedance(params, spectrum.frequencies, shunt) / spectrum.impedances
    return np.concatenate([np.log(np.abs(ratio)), np.angle(ratio)])


def residual(params: BvdParams, spectrum: ImpedanceSpectrum, shunt_resistance: float = 0.0) -> float:
    """Objective value: sum of squared log-magnitude and phase residuals.

    Zero iff the model matches every point exactly; invariant under
    reordering of the spectrum points.
    """
    r = _log_residual(params, spectrum, shunt_resistance)
    return float(r @ r)


def initial_guess(spectrum: ImpedanceSpectrum, c0: float) -> BvdParams:
    """Starting parameters from the resonance features of the spectrum.

    Raw |Z| rides on a capacitive baseline that falls ~20% across a +-10%
    window and can bury a weak dip/peak pair, so the features are anchored
    on Re(Z) instead: pure capacitance contributes nothing to it, while any
    resonance produces a single positive bump spanning [f_s, f_p].  The
    series resonance f_s is the |Z| minimum at or left of that bump and the
    parallel resonance f_p the |Z| maximum at or right of it; then

        C = C0 ((f_p/f_s)^2 - 1),    L = 1/((2 pi f_s)^2 C),

    and R inverts the static-branch loading of the dip magnitude,
    |Z(f_s)| = |X0| R / sqrt(R^2 + X0^2).  (Reading R off as |Z(f_s)|
    directly would underestimate it several-fold once R is comparable to
    |X0|, as it is for fingertip-loaded devices.)

    Raises:
        NoResonanceFound: no resistive bump with an interior minimum/maximum
            pair around it.
    """
    if not c0 > 0:
        raise InvalidProperty(f"c0 must be positive, got {c0!r}")
    mag = np.abs(spectrum.impedances)
    # Box-smooth so per-point noise cannot displace the bump when damping
    # is heavy; width 1 (no-op) for short noise-free sweeps.
    real = np.real(spectrum.impedances)
    width = max(1, len(real) // 256)
    if width > 1:
        kernel = np.ones(width)
        coverage = np.convolve(np.ones_like(real), kernel, mode="same")
        bump = np.convolve(real, kernel, mode="same") / coverage
    else:
        bump = real
    i_bump = int(np.argmax(bump))
    last = len(spectrum) - 1
    # Featureless spectra (pure capacitor) have rounding-level Re(Z).
    if not (0 < i_bump < last) or bump[i_bump] <= 1e-9 * float(mag[i_bump]):
        raise NoResonanceFound(
            "spectrum has no interior resistive bump; "
            "widen the frequency window around the resonance"
        )
    i_min = int(np.argmin(mag[: i_bump + 1]))
    i_max = i_bump + int(np.argmax(mag[i_bump:]))
    if not (0 < i_min < last and 0 < i_max < last and i_min < i_max):
        raise NoResonanceFound(
            "spectrum has no interior magnitude minimum followed by a maximum; "
            "widen the frequency window around the resonance"
        )
    f_s = float(spectrum.frequencies[i_min])
    f_p = float(spectrum.frequencies[i_max])
    c = c0 * ((f_p / f_s) ** 2 - 1.0)
    l = 1.0 / ((2.0 * math.pi * f_s) ** 2 * c)
    x0 = 1.0 / (2.0 * math.pi * f_s * c0)
    z_min = float(mag[i_min])
    if z_min < 0.999 * x0:
        r = z_min * x0 / math.sqrt(x0 * x0 - z_min * z_min)
    else:
        r = z_min  # dip barely loaded; inversion ill-conditioned
    return BvdParams(inductance=l, capacitance=c, resistance=r, static_capacitance=c0)


def _params_from_theta(theta: np.ndarray, c0: float, fit_c0: bool) -> BvdParams:
    l, c, r = np.exp(theta[:3])
    c0_val = float(np.exp(theta[3])) if fit_c0 else c0
    return BvdParams(float(l), float(c), float(r), c0_val)


def _jacobian(params: BvdParams, spectrum: ImpedanceSpectrum, shunt: float, fit_c0: bool) -> np.ndarray:
    """Analytic Jacobian of the log-residual w.r.t. log parameters."""
    w = 2.0 * np.pi * spectrum.frequencies
    l, c, r, c0 = (
        params.inductance,
        params.capacitance,
        params.resistance,
        params.static_capacitance,
    )
    zs = -1j / (w * c0)
    zm = r + 1j * (w * l - 1.0 / (w * c))
    zsum = zs + zm
    z_total = zs * zm / zsum + shunt
    dz_dzm = (zs / zsum) ** 2
    cols = [
        dz_dzm * (1j * w * l) / z_total,  # d/d lnL
        dz_dzm * (1j / (w * c)) / z_total,  # d/d lnC
        dz_dzm * r / z_total,  # d/d lnR
    ]
    if fit_c0:
        dz_dzs = (zm / zsum) ** 2
        cols.append(dz_dzs * (-zs) / z_total)  # d/d lnC0
    jc = np.stack(cols, axis=1)
    return np.concatenate([jc.real, jc.imag], axis=0)


def fit_bvd(spectrum: ImpedanceSpectrum, c0: float, options: FitOptions | None = None) -> FitResult:
    """Recover (L, C, R) -- optionally C0 -- by damped Gauss-Newton.

    Starts from ``options.initial`` or :func:`initial_guess`, iterates
    Levenberg-Marquardt steps in log-parameter space, and stops when the
    relative parameter step or the relative cost improvement falls below
    the configured tolerances.

    Raises:
        NoResonanceFound: propagated from the automatic initial guess.
        FitNotConverged: iteration cap hit or damping diverged; the
            exception's ``result`` holds the best parameters seen.
    """
    opts = options or FitOptions()
    shunt = opts.shunt_resistance
    start = opts.initial if opts.initial is not None else initial_guess(spectrum, c0)
    fit_c0 = opts.fit_static_capacitance

    theta = np.log([start.inductance, start.capacitance, start.resistance])
    if fit_c0:
        theta = np.append(theta, math.log(start.static_capacitance))

    params = _params_from_theta(theta, c0, fit_c0)
    res = _log_residual(params, spectrum, shunt)
    cost = float(res @ res)
    if not np.isfinite(cost):
        raise FitNotConverged(
            "objective is not finite at the starting point",
            FitResult(params, cost, 0, False),
        )

    lam = 1e-3
    iterations = 0
    for _ in range(opts.max_iterations):
        jac = _jacobian(params, spectrum, shunt, fit_c0)
        grad = jac.T @ res
        hess = jac.T @ jac
        diag = np.diag(np.maximum(np.diag(hess), 1e-30))

        # inner damping loop: inflate lambda until a step lowers the cost
        while True:
            try:
                step = np.linalg.solve(hess + lam * diag, -grad)
            except np.linalg.LinAlgError:
                step = None
            if step is not None:
                new_theta = theta + step
                new_params = _params_from_theta(new_theta, c0, fit_c0)
                new_res = _log_residual(new_params, spectrum, shunt)
                new_cost = float(new_res @ new_res)
                if np.isfinite(new_cost) and new_cost <= cost:
                    break
            lam *= 3.0
            if lam > 1e12:
                raise FitNotConverged(
                    f"damping diverged after {iterations} accepted steps",
                    FitResult(params, cost, iterations, False),
                )

        iterations += 1
        improvement = cost - new_cost
        theta, params, res = new_theta, new_params, new_res
        cost_prev, cost = cost, new_cost
        lam = max(lam / 3.0, 1e-12)

        if np.max(np.abs(step)) < opts.step_tolerance:
            break
        if improvement <= opts.residual_tolerance * max(cost_prev, 1e-300):
            break
    else:
        raise FitNotConverged(
            f"no convergence within {opts.max_iterations} iterations",
            FitResult(params, cost, iterations, False),
        )

    return FitResult(params=params, residual_norm=cost, iterations=iterations, converged=True)


def generate_spectrum(
    params: BvdParams,
    f_start: float | None = None,
    f_stop: float | None = None,
    n_points: int = 201,
    noise: float = 0.0,
    seed: int | None = None,
    shunt_resistance: float = 0.0,
) -> ImpedanceSpectrum:
    """Synthesize a measurement-like spectrum from known parameters.

    The default window is [0.9, 1.1] times the resonance, wide enough to
    include both the dip and the peak for any C/C0 ratio up to ~0.2.
    ``noise`` is the relative standard deviation of multiplicative
    complex Gaussian noise per quadrature (0.01 means 1%).
    """
    f_r = resonant_frequency(params)
    f_lo = f_start if f_start is not None else 0.9 * f_r
    f_hi = f_stop if f_stop is not None else 1.1 * f_r
    freqs = np.linspace(f_lo, f_hi, n_points)
    z = model_impedance(params, freqs, shunt_resistance)
    if noise:
        rng = np.random.default_rng(seed)
        z = z * (1.0 + noise * (rng.standard_normal(n_points) + 1j * rng.standard_normal(n_points)))
    return ImpedanceSpectrum(frequencies=freqs, impedances=z)


def load_impedance_csv(path) -> ImpedanceSpectrum:
    """Read a spectrum CSV with header ``frequency_hz,magnitude_ohm,phase_deg``.

    Rows may be in any frequency order; phase is in degrees.

    Raises:
        MalformedSpectrumFile: unreadable file, wrong header, ragged or
            non-numeric rows, or non-positive magnitude.
        InvalidProperty: parsed values violate spectrum invariants.
    """
    try:
        with open(path, "r", encoding="utf-8", newline="") as handle:
            reader = csv.reader(handle)
            rows = [row for row in reader if row]
    except OSError as exc:
        raise MalformedSpectrumFile(f"cannot read spectrum file {path}: {exc}") from exc
    if not rows or tuple(cell.strip() for cell in rows[0]) != SPECTRUM_CSV_HEADER:
        raise MalformedSpectrumFile(
            f"{path}: first row must be the header {','.join(SPECTRUM_CSV_HEADER)}"
        )
    points = []
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != 3:
            raise MalformedSpectrumFile(f"{path}: line {lineno} has {len(row)} fields, expected 3")
        try:
            freq, mag, phase_deg = (float(cell) for cell in row)
        except ValueError as exc:
            raise MalformedSpectrumFile(f"{path}: line {lineno} is not numeric: {row}") from exc
        if not mag > 0:
            raise MalformedSpectrumFile(f"{path}: line {lineno} magnitude must be positive")
        points.append((freq, mag * cmath.exp(1j * math.radians(phase_deg))))
    return ImpedanceSpectrum.from_points(points)


def save_impedance_csv(spectrum: ImpedanceSpectrum, handle) -> None:
    """Write a spectrum to an open text stream in the CSV interchange format."""
    writer = csv.writer(handle, lineterminator="\n")
    writer.writerow(SPECTRUM_CSV_HEADER)
    for freq, z in spectrum.points:
        writer.writerow(
            [format(freq, ".12g"), format(abs(z), ".12g"), format(math.degrees(cmath.phase(z)), ".12g")]
        )
