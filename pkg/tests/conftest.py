import os

import hypothesis
import numpy as np

hypothesis.settings.register_profile(
    "fast", max_examples=25, deadline=None,
    suppress_health_check=[hypothesis.HealthCheck.too_slow])
hypothesis.settings.register_profile(
    "thorough", max_examples=200, deadline=None,
    suppress_health_check=[hypothesis.HealthCheck.too_slow])
hypothesis.settings.load_profile(os.environ.get("SUPERRES_HYPOTHESIS_PROFILE", "fast"))

np.seterr(all="warn")
