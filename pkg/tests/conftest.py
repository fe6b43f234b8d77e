import pytest

from coarseends import builtin_groups
from coarseends.windows import generate_window


@pytest.fixture(scope="session")
def catalog():
    return builtin_groups()


@pytest.fixture(scope="session")
def z_window_40(catalog):
    return generate_window(catalog["Z"], 40)


@pytest.fixture(scope="session")
def z2_window_12(catalog):
    return generate_window(catalog["Z^2"], 12)


@pytest.fixture(scope="session")
def f2_window_8(catalog):
    return generate_window(catalog["F2"], 8)


@pytest.fixture(scope="session")
def f2_window_12(catalog):
    # about a million elements; built once and shared
    return generate_window(catalog["F2"], 12)


@pytest.fixture(scope="session")
def sum_window_60(catalog):
    return generate_window(catalog["sumZ/2"], 60)


@pytest.fixture(scope="session")
def battery_report():
    # the 16-fixture battery is the single most expensive computation in
    # the suite; run it once and share the report
    from coarseends.equivalence import run_battery

    return run_battery()
