from .timing import TIMINGS, Timings, timed
