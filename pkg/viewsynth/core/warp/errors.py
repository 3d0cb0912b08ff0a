class WarpError(ValueError):
    pass
