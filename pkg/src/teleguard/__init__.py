"""teleguard: desk-scale teleoperation pipeline with armed-person detection."""

from .kernels import BACKEND_NAME as kernel_backend

__version__ = "0.1.0"
__all__ = ["kernel_backend", "__version__"]
