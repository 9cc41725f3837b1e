class ConfigurationError(ValueError):
    """Invalid structural parameters (grid, model, signal or experiment)."""


class ShapeError(ValueError):
    """Input vector or index does not fit the model dimensions."""
