"""Smoke test for the samrot Python extension.

Build and install first:  pip install --no-build-isolation -e crates/python
"""

import json
import math
import warnings

import samrot


def close(a, b, tol):
    assert abs(a - b) <= tol, f"{a} vs {b} (tol {tol})"


def angle_diff(a, b):
    return (a - b + math.pi) % (2 * math.pi) - math.pi


def main():
    eros = samrot.InertiaParams.from_moments(0.229427, 0.963754, 1.0)
    close(eros.beta, 0.977853, 1e-5)

    p = samrot.InertiaParams.from_alpha_beta(1.0, 0.8)
    s0 = samrot.AndoyerState.from_inclination(math.radians(5.0), nu=0.3)
    aa = samrot.to_action_angle(s0, p.beta)
    back = samrot.from_action_angle(aa, p.beta)
    close(back.N, s0.N, 1e-14)
    close(angle_diff(back.nu, s0.nu), 0.0, 1e-12)

    main_part, perturbation = samrot.sam_split(s0, p)
    assert perturbation <= 0.0
    close(main_part + perturbation, samrot.hamiltonian(s0, p), 1e-15)

    theory = samrot.SamTheory()
    mean = theory.osculating_to_mean(aa, p.beta, 9)
    osc = theory.mean_to_osculating(mean, p.beta)
    close(osc.L, aa.L, 1e-12)

    nl, ng = theory.secular_frequencies(samrot.MeanElements(0.0, 0.0, 0.1, 1.0, 10), 1.0, 0.0, 1.0)
    close(nl, 0.9, 1e-15)
    close(ng, 1.1, 1e-15)

    times = [0.0, 25.0, 50.0, 75.0, 100.0]
    series = theory.propagate(s0, p, times, 5)
    truth = samrot.integrate(s0, p, 100.0, 1e-13, 4)
    for state, (t, ref, energy) in zip(series, truth):
        close(angle_diff(state.nu, ref.nu), 0.0, 1e-6)
        close(state.N, ref.N, 1e-8)
        close(energy, truth[0][2], 1e-11)

    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        theory.secular_frequencies(samrot.MeanElements(0.0, 0.0, 0.45, 1.0), 1.0, 0.6, 1.0)
    assert caught, "delta above the guard should warn"

    try:
        samrot.AndoyerState(0.0, 0.0, 1.0, -0.5).mirrored()
        samrot.to_action_angle(samrot.AndoyerState(0.0, 0.0, 1.0, -0.5), 0.5)
    except ValueError:
        pass
    else:
        raise AssertionError("negative N must be rejected")

    regenerated = json.loads(samrot.regenerate_tables(10))
    baked = json.loads(theory.tables_json())
    for family in ("q", "g", "l", "L"):
        for key, value in baked[family].items():
            assert regenerated[family][key] == value, (family, key)

    names = [b["name"] for b in json.loads(samrot.bodies())]
    assert names == ["Mars", "Earth", "Moon", "Eros"]
    print("python smoke test: ok")


if __name__ == "__main__":
    main()
