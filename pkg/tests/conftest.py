def pytest_configure(config):
    config.addinivalue_line("markers", "slow: full-range runs over hundreds of targets")
