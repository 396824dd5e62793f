"""Parameters (d, k, n) of a no-k-equal manifold and the constants derived from them."""

from dataclasses import dataclass
from math import comb

# Enumeration is exponential in n; anything above this is refused.
DEFAULT_N_CAP = 20


class ParameterError(ValueError):
    """Raised when (d, k, n) violate d >= 2, k >= 3, n > k."""


@dataclass(frozen=True, order=True)
class Parameters:
    d: int
    k: int
    n: int

    def __post_init__(self):
        for name in ("d", "k", "n"):
            value = getattr(self, name)
            if not isinstance(value, int) or isinstance(value, bool):
                raise ParameterError(f"{name} must be an integer, got {value!r}")
        if self.d < 2:
            raise ParameterError(f"requires d >= 2 (got d={self.d})")
        if self.k < 3:
            raise ParameterError(f"requires k >= 3 (got k={self.k})")
        if self.n <= self.k:
            raise ParameterError(f"requires n > k (got n={self.n}, k={self.k})")

    @property
    def m(self) -> int:
        return self.n // self.k

    @property
    def b(self) -> int:
        return self.n - self.m * self.k

    @property
    def a(self) -> int:
        """Bottom positive degree d(k-1)-1 (also conn + 1)."""
        return self.d * (self.k - 1) - 1

    @property
    def square_degree(self) -> int:
        return self.d * (self.k - 2)

    @property
    def edge_degree(self) -> int:
        return self.d - 1

    @property
    def hdim(self) -> int:
        return self.m * self.a + (self.d - 1) * (self.m + self.b - 1)

    @property
    def bottom_rank(self) -> int:
        return comb(self.n, self.k)

    def check_cap(self, cap: int = DEFAULT_N_CAP):
        if self.n > cap:
            raise ParameterError(f"n={self.n} exceeds the enumeration cap {cap}")

    def as_tuple(self):
        return (self.d, self.k, self.n)
