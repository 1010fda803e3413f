class PlotkitError(Exception):
    """Base for all failures this tool reports deliberately."""


class SchemaError(PlotkitError):
    """CSV missing, empty, or not in the sweep schema."""


class DataShapeError(PlotkitError):
    """Rows are valid but do not form the shape the plot kind needs."""
