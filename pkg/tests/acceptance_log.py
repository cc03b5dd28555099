"""Collects one verdict line per acceptance criterion for the terminal summary."""

RESULTS: dict[int, str] = {}


def record(criterion: int, title: str, ok: bool, detail: str) -> str:
    line = f"criterion {criterion} ({title}): {'PASS' if ok else 'FAIL'} - {detail}"
    RESULTS[criterion] = line
    print(line)
    return line
