"""Exception types shared across the package."""


class CollisionError(ArithmeticError):
    """A mapped quadrature point coincides with an interpolation node.

    Barycentric evaluation at such a point divides by (nearly) zero, so
    construction is aborted instead of producing overflowed entries.
    The offending index triple is carried for diagnostics: ``i`` is the
    interpolation-node index, ``j`` the target-node index and ``k`` the
    index of the mapped quadrature point.
    """

    def __init__(self, i, j, k, detail=""):
        self.i = int(i)
        self.j = int(j)
        self.k = int(k)
        msg = f"node collision at (i={self.i}, j={self.j}, k={self.k})"
        if detail:
            msg = f"{msg}: {detail}"
        super().__init__(msg)


class ConvergenceError(RuntimeError):
    """An iterative procedure failed to reach its tolerance."""
