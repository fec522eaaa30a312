"""One PASS/FAIL line per acceptance criterion, shared between the tests and the terminal summary."""

RESULTS: list[str] = []


def record(number, title: str, ok: bool, detail: str = "") -> None:
    line = f"{'PASS' if ok else 'FAIL'}  criterion {number}: {title}" + (f" ({detail})" if detail else "")
    RESULTS.append(line)
    print(line)
