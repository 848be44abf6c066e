"""Verdicts of the acceptance tests, printed in the pytest terminal summary."""

RESULTS: dict = {}


def record(number: int, title: str, passed: bool, detail: str = "") -> None:
    RESULTS[number] = (title, passed, detail)
    print(line(number))


def line(number: int) -> str:
    title, passed, detail = RESULTS[number]
    return f"criterion {number:2d} {'PASS' if passed else 'FAIL'}: {title}" + (f" ({detail})" if detail else "")
