"""One line per acceptance criterion, printed with its verdict.

The lines appear live under ``pytest -s`` and in the terminal summary otherwise.
"""

import pytest

from latticeforge import acceptance


@pytest.mark.parametrize("number", sorted(acceptance.CRITERIA))
def test_criterion(number, acceptance_lines):
    res = acceptance.run(number, jobs=1)
    line = res.line()
    acceptance_lines.append(line)
    print(line)
    assert res.passed, line
