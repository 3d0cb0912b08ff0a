class TrainingError(RuntimeError):
    pass


class NonFiniteLossError(TrainingError):
    """Loss became NaN or infinite; ``seeds`` identify the samples of the offending batch."""

    def __init__(self, step: int, seeds: list[int], component: str):
        self.step = step
        self.seeds = seeds
        self.component = component
        super().__init__(
            f"non-finite {component} at step {step}; batch seeds {', '.join(str(s) for s in seeds)}"
        )
