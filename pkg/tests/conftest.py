import pytest

from exborel.linalg import QQ
from exborel.quivers import parse_input
from exborel.pipeline import make_pipeline_from_job

E1_TEXT = """
[quiver]
vertices: 1 2
arrow: a 1 2
[preorder]
linear
[deltas]
standard
"""

E2_TEXT = """
[quiver]
vertices: 1 2 3
arrow: a 1 2
arrow: b 2 3
[relations]
b*a
[preorder]
linear
[deltas]
standard
"""

E3_TEXT = """
[quiver]
vertices: 1
arrow: x 1 1
[relations]
x*x
[preorder]
linear
[deltas]
standard
"""

E5_TEXT = """
[quiver]
vertices: 1 2 3 4
arrow: a 1 2
arrow: b 2 3
arrow: c 3 4
[relations]
c*b*a
[preorder]
linear
[deltas]
standard
"""

E6_TEXT = """
[quiver]
vertices: 1 2
arrow: x 1 1
arrow: a 1 2
arrow: y 2 2
nilpotency_bound: 4
[relations]
x*x
y*y
a*x - y*a
[preorder]
linear
[deltas]
standard
"""

TEXTS = {"E1": E1_TEXT, "E2": E2_TEXT, "E3": E3_TEXT, "E5": E5_TEXT,
         "E6": E6_TEXT}

_cache = {}


def build_pipeline(name):
    if name not in _cache:
        pl = make_pipeline_from_job(parse_input(TEXTS[name]), QQ)
        pl.build()
        _cache[name] = pl
    return _cache[name]


@pytest.fixture(scope="session")
def field():
    return QQ


@pytest.fixture(scope="session")
def e1():
    return build_pipeline("E1")


@pytest.fixture(scope="session")
def e2():
    return build_pipeline("E2")


@pytest.fixture(scope="session")
def e3():
    return build_pipeline("E3")


@pytest.fixture(scope="session")
def e5():
    return build_pipeline("E5")


@pytest.fixture(scope="session")
def e6():
    return build_pipeline("E6")
