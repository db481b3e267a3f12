import pytest


def pytest_addoption(parser):
    parser.addoption("--a9a_location", action="store",
                     default="data/a9a",
                     help="location of the a9a LIBSVM file")
    parser.addoption("--run-benchmarks", action="store_true", default=False,
                     help="run the minutes long benchmark orderings")


def pytest_configure(config):
    config.addinivalue_line("markers", "benchmark: slow seeded benchmark run, needs --run-benchmarks")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--run-benchmarks"):
        return
    skip = pytest.mark.skip(reason="needs --run-benchmarks")
    for item in items:
        if "benchmark" in item.keywords:
            item.add_marker(skip)


@pytest.fixture
def a9a_location(request):
    return request.config.getoption("--a9a_location")
