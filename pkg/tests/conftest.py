import numpy as np
from hypothesis import settings

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")


def obj(rows):
    return np.array(rows, dtype=object)
