import os

import pytest

import cyclelab


def get_gold_dir():
    return os.path.join(os.path.dirname(__file__), "tests", "gold")


def get_system_dir():
    return os.path.join(os.path.dirname(__file__), "tests", "systems")


def _compare(text, gold_text):
    if text != gold_text:
        print(text)
        print("-" * 80)
        print(gold_text)
        assert False


def check_gold_fn(obj, gold_name):
    """compare the canonical rendering of obj with tests/gold/<gold_name>.txt"""
    gold = os.path.join(get_gold_dir(), gold_name + ".txt")
    assert os.path.isfile(gold)
    text = obj if isinstance(obj, str) else cyclelab.render(obj)
    with open(gold) as f:
        gold_text = f.read()
    _compare(text.rstrip("\n") + "\n", gold_text)


@pytest.fixture(autouse=True)
def reset_global_tolerance():
    cyclelab.set_global_tolerance(None)
    yield
    cyclelab.set_global_tolerance(None)


@pytest.fixture
def check_gold():
    return check_gold_fn


@pytest.fixture
def system_file():
    def get(name):
        return os.path.join(get_system_dir(), name)
    return get
