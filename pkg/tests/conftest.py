import random

import pytest
from hypothesis import HealthCheck, settings, strategies as st

from catrewrite.garbage import example_graphs
from catrewrite.instances import random_graph, random_instance

settings.register_profile("default", max_examples=60, deadline=None, derandomize=True,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture
def ex():
    """The small reachability example graphs: A, L1, L2, AC, ACD."""
    return example_graphs()


@st.composite
def graphs(draw, max_nodes=4, max_edges=5):
    seed = draw(st.integers(0, 2**32 - 1))
    return random_graph(random.Random(seed), max_nodes, max_edges)


@st.composite
def instances(draw, system):
    seed = draw(st.integers(0, 2**32 - 1))
    return random_instance(random.Random(seed), system)
