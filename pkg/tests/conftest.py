import os

from hypothesis import HealthCheck, settings

settings.register_profile(
    "ci",
    max_examples=60,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow],
    deadline=None,
)
settings.load_profile("ci")

# Seed for the corpus-style property tests; override to explore.
SEED = int(os.environ.get("RELMACH_TEST_SEED", "271828"))
