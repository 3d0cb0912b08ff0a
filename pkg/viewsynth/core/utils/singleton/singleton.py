from threading import Lock


class SingletonMeta(type):
    """One shared instance per class; creation is guarded by a lock."""

    _instances = {}
    _lock: Lock = Lock()

    def __call__(cls, *args, **kwargs):
        with cls._lock:
            if cls not in cls._instances:
                instance = super().__call__(*args, **kwargs)
                cls._instances[cls] = instance
        return cls._instances[cls]

    def reset(cls):
        """Drop the cached instance so the next call builds a fresh one."""
        with cls._lock:
            cls._instances.pop(cls, None)
