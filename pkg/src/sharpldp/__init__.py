"""Sharp shrinking-window large deviations for subshifts of finite type."""

__version__ = "0.1.0"
