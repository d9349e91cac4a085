"""Shared numeric comparison helpers.

Partition functions in the imaginary parameter domains can cancel to values
near zero, where a purely relative comparison is meaningless.  All identity
checks therefore compare against max(|reference|, 1e-3 * W), where
W = sum over configurations of |weight| (the partition function of the
instance with every parameter replaced by its real part).  For instances
whose Z is resolvable this is the plain relative error; for
cancellation-dominated values it bounds the error in units of the total
weight, which is the scale on which floating-point error lives.
"""

from ising_pfn.model import IsingInstance
from ising_pfn.oracle import brute_force_Z, transfer_matrix_Z


def weight_scale(inst: IsingInstance) -> float:
    realified = IsingInstance(
        n=inst.n, m=inst.m,
        h={k: complex(v.real) for k, v in inst.h.items()},
        jv={k: complex(v.real) for k, v in inst.jv.items()},
        jh={k: complex(v.real) for k, v in inst.jh.items()},
    )
    if inst.num_sites <= 22:
        return brute_force_Z(realified).z.real
    return transfer_matrix_Z(realified).z.real


def assert_close_z(got: complex, want: complex, rel: float, w: float, ctx=None) -> None:
    bound = rel * max(abs(want), 1e-3 * w)
    assert abs(got - want) <= bound, (got, want, abs(got - want), bound, ctx)
