class GeometryError(Exception):
    pass


class DomainError(GeometryError, ValueError):
    pass


class ValidationError(GeometryError, ValueError):
    pass
