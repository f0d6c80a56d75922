import logging

import pytest

from realwdvv import config
from realwdvv.errors import ConfigurationError


@pytest.mark.parametrize("raw, expected", [("+1", 1), ("1", 1), (" -1 ", -1)])
def test_parse_seed(raw, expected):
    assert config.parse_seed(raw) == expected


@pytest.mark.parametrize("raw", ["0", "2", "-", ""])
def test_parse_seed_rejects_other_values(raw):
    with pytest.raises(ConfigurationError):
        config.parse_seed(raw)


def test_parse_degree():
    assert config.parse_degree("4") == 4
    with pytest.raises(ConfigurationError):
        config.parse_degree("0")
    with pytest.raises(ConfigurationError):
        config.parse_degree("four")


def test_configure_logging_installs_one_handler():
    logger = logging.getLogger("realwdvv")
    try:
        config.configure_logging("debug")
        config.configure_logging(logging.INFO)
        assert len(logger.handlers) == 1
        assert logger.level == logging.INFO
    finally:
        for handler in list(logger.handlers):
            logger.removeHandler(handler)


def test_configure_logging_rejects_unknown_levels():
    with pytest.raises(ConfigurationError):
        config.configure_logging("chatty")
