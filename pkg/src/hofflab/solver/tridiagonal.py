import numpy as np
from scipy.linalg import LinAlgError, solve_banded

from hofflab.errors import LinearSolveError


def solve_cyclic(
    lower: np.ndarray, diag: np.ndarray, upper: np.ndarray, rhs: np.ndarray
) -> np.ndarray:
    """
    Solve a periodic tridiagonal system.

    Row j reads lower[j]·x[j-1] + diag[j]·x[j] + upper[j]·x[j+1] = rhs[j] with
    indices taken modulo n, so lower[0] and upper[n-1] are the corner entries.
    The corners are removed with a Sherman-Morrison rank-one correction and
    both resulting banded systems are solved in one `solve_banded` call.
    """
    n = diag.shape[0]
    if n < 3:
        raise LinearSolveError(f"cyclic systems need at least 3 unknowns, got {n}")

    gamma = -diag[0]
    if gamma == 0:
        raise LinearSolveError("zero leading diagonal entry")
    beta = lower[0]
    alpha = upper[-1]

    modified = np.array(diag, dtype=np.float64)
    modified[0] = diag[0] - gamma
    modified[-1] = diag[-1] - alpha * beta / gamma

    ab = np.zeros((3, n))
    ab[0, 1:] = upper[:-1]
    ab[1] = modified
    ab[2, :-1] = lower[1:]

    correction = np.zeros(n)
    correction[0] = gamma
    correction[-1] = alpha

    try:
        solved = solve_banded((1, 1), ab, np.column_stack([rhs, correction]))
    except (LinAlgError, ValueError) as exc:
        raise LinearSolveError(f"tridiagonal solve failed: {exc}") from exc

    y, z = solved[:, 0], solved[:, 1]
    denominator = 1.0 + z[0] + beta * z[-1] / gamma
    if denominator == 0:
        raise LinearSolveError("singular cyclic system (Sherman-Morrison denominator)")
    x = y - z * ((y[0] + beta * y[-1] / gamma) / denominator)

    if not np.all(np.isfinite(x)):
        raise LinearSolveError("tridiagonal solve produced non-finite values")
    return x


def implicit_diffusion_solve(
    mass: np.ndarray,
    coef_face: np.ndarray,
    theta_dt: float,
    rhs: np.ndarray,
    dx: float,
) -> np.ndarray:
    """
    Solve (diag(mass) - theta_dt·L)x = rhs, L the compact face operator of
    `hofflab.core.operators.face_diffusion` with face coefficients
    `coef_face[j] = c[j+1/2]`.
    """
    scale = theta_dt / dx**2
    right = coef_face
    left = np.roll(coef_face, 1)
    return solve_cyclic(
        lower=-scale * left,
        diag=mass + scale * (left + right),
        upper=-scale * right,
        rhs=rhs,
    )
