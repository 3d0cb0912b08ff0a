class GenerationError(RuntimeError):
    pass


class DatasetError(ValueError):
    pass
