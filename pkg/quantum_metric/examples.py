"""
Two families of finite approximations to a fixed space:

- [0, 1] approximated by itself with seminorms that flatten a vanishing end
  interval, where no uniform comparison constant exists;
- ℕ̄ approximated by sequences constant from n on, where the tunnels
  converge but no bridge builder exists.
"""
from fractions import Fraction
from typing import Optional

from helpers.logger import LoggerHelper
from quantum_metric.qcms import FiniteQcms, dirac, kantorovich
from quantum_metric.tunnels import TunnelSpec, bridge_builder_check, bridge_distance, quotient_check, tunnel_extent_bounds

logger = LoggerHelper.get_logger(__name__, prefix='examples')


def interval_spaces(n: int, m: Optional[int] = None):
    """
    Grid {k/m} ∪ {1 − 1/n²} on [0, 1] carrying L_{[0,1]} and
    L_n = L_{[0,1−1/n²]} + (1/n)·L_{[1−1/n²,1]}.

    Returns (positions, head, tail, full, level).
    """
    if n < 1:
        raise ValueError(f"n must be at least 1, got {n}")
    m = 4 * n * n if m is None else m
    if m < 4 * n * n:
        raise ValueError(f"grid of {m} cells is too coarse to resolve 1/n² = 1/{n * n}; need at least {4 * n * n}")
    breakpoint = 1 - Fraction(1, n * n)
    positions = sorted({Fraction(k, m) for k in range(m + 1)} | {breakpoint})
    head = [k for k, x in enumerate(positions) if x <= breakpoint]
    tail = [k for k, x in enumerate(positions) if x >= breakpoint]

    full = FiniteQcms.from_line(positions, "adjacent", name="L_[0,1]")
    level = FiniteQcms.sum_of(
        FiniteQcms.from_line(positions, "adjacent", support=head),
        FiniteQcms.from_line(positions, "adjacent", support=tail),
        Fraction(1, n), name=f"L_{n}",
    )
    return positions, head, tail, full, level


def interval_tunnel(n: int, m: Optional[int] = None) -> TunnelSpec:
    """The identity tunnel between L_{[0,1]} and L_n with bridge weight n+1"""
    positions, _, _, full, level = interval_spaces(n, m)
    identity = tuple((k, k) for k in range(len(positions)))
    return TunnelSpec(full, level, identity, Fraction(1, n + 1))


def interval_example(n: int, m: Optional[int] = None, samples: Optional[int] = None,
                     seed: Optional[int] = None) -> dict:
    """
    Seminorm values at the witness f_n = (x − (1 − 1/n²))⁺, the extent
    bracket of the identity tunnel and the identity bridge builder at ε = 1/n.
    """
    m = 4 * n * n if m is None else m
    positions, head, tail, full, level = interval_spaces(n, m)
    breakpoint = 1 - Fraction(1, n * n)
    weight = Fraction(1, n)

    witness = [max(Fraction(0), x - breakpoint) for x in positions]
    full_value = FiniteQcms.from_line(positions, "all").value(witness)
    level_value = (FiniteQcms.from_line(positions, "all", support=head).value(witness)
                   + weight * FiniteQcms.from_line(positions, "all", support=tail).value(witness))

    tunnel = interval_tunnel(n, m)
    identity = tunnel.pairs
    extent = tunnel_extent_bounds(tunnel, samples=samples, seed=seed)
    builder = bridge_builder_check(full, level, identity, weight, samples=samples, seed=seed)

    logger.info(f"[0,1] example n={n}: L(f_n)={full_value}, L_n(f_n)={level_value}, extent ≤ {extent.upper:.6g}")
    return {
        "example": "interval",
        "n": n,
        "grid": m,
        "points": len(positions),
        "seminorm_values": {
            "L_full": float(full_value),
            "L_level": float(level_value),
            "ratio": float(full_value / level_value),
        },
        "extent_upper": extent.upper,
        "extent_lower": extent.lower,
        "extent_limit": 1 / n,
        "bridge_epsilon": float(tunnel.epsilon),
        "bridge_builder": {"epsilon": float(weight), "holds": builder.holds, "exhaustive": builder.exhaustive,
                           "checked": builder.checked},
        "witnesses": builder.witnesses[:3] if builder.holds else [builder.violation],
    }


def nbar_threshold(epsilon: Fraction) -> int:
    """Smallest n with 1/(n+1) < ε/2"""
    n = 1
    while Fraction(1, n + 1) >= epsilon / 2:
        n += 1
    return n


def nbar_spaces(n: int, m: int):
    """
    Truncated ℕ̄ on X = {0, …, m−1, ∞} at positions 1/(k+1) and 0, and the
    level-n space Y = {0, …, n−1, tail} with weights 1+1/n at 0, 1/k at k
    and 1/n for the constant tail.
    """
    x_positions = [Fraction(1, k + 1) for k in range(m)] + [Fraction(0)]
    x_labels = list(range(m)) + ["inf"]
    y_positions = [1 + Fraction(1, n)] + [Fraction(1, k) for k in range(1, n)] + [Fraction(1, n)]
    y_labels = list(range(n)) + ["tail"]
    limit = FiniteQcms.from_line(x_positions, "adjacent", labels=x_labels, name="L_inf")
    level = FiniteQcms.from_line(y_positions, "adjacent", labels=y_labels, name=f"L_{n}")
    return limit, level, x_positions, y_positions


def shift_pairs(n: int, m: int):
    """a_k against (π c)_k = c_{max(k−1, 0)} for every index k of ℕ̄"""
    tail, infinity = n, m
    pairs = [(max(k - 1, 0), k) for k in range(n)]
    pairs += [(j, tail) for j in range(n - 1, m)]
    pairs.append((infinity, tail))
    return sorted(set(pairs))


def identity_pairs(n: int, m: int):
    """a_k against b_k, with indices from n on read off the tail"""
    tail, infinity = n, m
    pairs = [(k, k) for k in range(n)] + [(j, tail) for j in range(n, m)]
    pairs.append((infinity, tail))
    return pairs


def nbar_example(n: int, m: Optional[int] = None, epsilon: Optional[Fraction] = None,
                 bridge_epsilon: Optional[Fraction] = None, samples: Optional[int] = None,
                 seed: Optional[int] = None) -> dict:
    """
    Seminorm values at δ₀, the shift tunnel with its extent bracket and
    quotient checks, the |b₁ − b₀| ≤ 1/n obstruction and the failing
    identity bridge builder.
    """
    if n < 2:
        raise ValueError(f"n must be at least 2, got {n}")
    m = n + 4 if m is None else m
    if m <= n + 2:
        raise ValueError(f"truncation m={m} must exceed n + 2 = {n + 2}")
    epsilon = Fraction(5, 2 * (n + 1)) if epsilon is None else Fraction(epsilon)
    bridge_epsilon = Fraction(1, 4 * n) if bridge_epsilon is None else Fraction(bridge_epsilon)

    limit, level, x_positions, y_positions = nbar_spaces(n, m)
    delta_x = [Fraction(int(k == 0)) for k in range(limit.size)]
    delta_y = [Fraction(int(k == 0)) for k in range(level.size)]
    limit_value = FiniteQcms.from_line(x_positions, "all").value(delta_x)
    level_value = FiniteQcms.from_line(y_positions, "all").value(delta_y)

    # max f(1) − f(0) over L_n(f) ≤ 1
    obstruction = kantorovich(level, dirac(level, 1), dirac(level, 0))

    tunnel = TunnelSpec(limit, level, shift_pairs(n, m), epsilon)
    extent = tunnel_extent_bounds(tunnel, samples=samples, seed=seed)
    quotients = [quotient_check(tunnel, side, samples=samples, seed=seed) for side in ("left", "right")]

    identity = identity_pairs(n, m)
    builder = bridge_builder_check(limit, level, identity, bridge_epsilon, samples=samples, seed=seed)
    normalized = [v / limit_value for v in delta_x]
    delta_distance = bridge_distance(normalized, level, identity, 1)

    logger.info(f"ℕ̄ example n={n}: L_inf(δ₀)={limit_value}, L_n(δ₀)={level_value}, "
                f"extent ≤ {extent.upper:.6g} with ε={epsilon}")
    return {
        "example": "nbar",
        "n": n,
        "truncation": m,
        "epsilon": float(epsilon),
        "n_threshold": nbar_threshold(epsilon),
        "seminorm_values": {
            "L_inf": float(limit_value),
            "L_level": float(level_value),
        },
        "extent_upper": extent.upper,
        "extent_lower": extent.lower,
        "quotient_checks": [q.to_dict() for q in quotients],
        "obstruction": {"max_gap": float(obstruction), "limit": 1 / n},
        "bridge_builder": {"epsilon": float(bridge_epsilon), "holds": builder.holds,
                           "exhaustive": builder.exhaustive, "checked": builder.checked},
        "witnesses": [
            {"vertex": "delta_0", "distance": float(delta_distance), "bound": float(bridge_epsilon),
             "violates": delta_distance >= bridge_epsilon},
        ] + ([builder.violation] if builder.violation else []),
    }
