from functools import lru_cache

from cmtorsion.modarith import is_probable_prime

ACCEPTANCE_LINES: list[str] = []


@lru_cache(maxsize=None)
def primes_between(lo: int, hi: int) -> tuple[int, ...]:
    return tuple(q for q in range(max(lo, 2), hi + 1) if is_probable_prime(q))


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
