from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple

from weilheight.mypy_util import add_slots


@add_slots
@dataclass(frozen=True)
class Settings:
    """
    The tunables shared by the numeric layers of the library.

    Args:
        precision_bits: Working precision of archimedean evaluations
        max_precision_bits: Cap for the doubling performed when a root or a place
            match cannot be certified at the requested precision
        hensel_start_digits: First p-adic precision tried for local factors
        hensel_max_digits: Cap for the p-adic precision doubling
        sample_shifts: The constants c of the sample elements t + c used to tell places
            apart
        denominator_bound: Default bound for rational rounding of coefficients
        irreducibility_prime_bound: Primes below this are searched for irreducibility
            witnesses
        rank_tolerance: Relative singular value threshold for numeric ranks
        continued_fraction_terms: Partial quotients tried when searching for a
            fundamental unit
    """

    precision_bits: int = 128
    max_precision_bits: int = 2048
    hensel_start_digits: int = 20
    hensel_max_digits: int = 2560
    sample_shifts: Tuple[int, ...] = (1, 2, 3)
    denominator_bound: int = 10000
    irreducibility_prime_bound: int = 100
    rank_tolerance: float = 1e-9
    continued_fraction_terms: int = 400

    @classmethod
    def make(cls, precision_bits: int, denominator_bound: int) -> Settings:
        """
        The defaults with the two tunables the command line exposes
        """
        return cls(precision_bits=precision_bits, denominator_bound=denominator_bound)


DEFAULT_SETTINGS = Settings()
