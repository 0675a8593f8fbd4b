"""Write the bundled corpus: small catalog entries plus extra groups.

The template-search group (marco2_128.pcp) is produced separately by
find_marco2_group.py and is left untouched here.
"""

from __future__ import annotations

import sys

from pgwb.catalog import CORPUS_DIR, SMALL_ENTRIES, presentation
from pgwb.pc import consistency_check

EXTRA = [("direct_product", "dihedral(32)", "cyclic(4)")]


def filename(entry):
    name, *params = entry
    tail = "_".join(str(p).replace("(", "").replace(")", "").replace(", ", "_") for p in params)
    return f"{name}_{tail}.pcp"


def main():
    CORPUS_DIR.mkdir(exist_ok=True)
    for entry in SMALL_ENTRIES + EXTRA:
        P = presentation(*entry)
        assert consistency_check(P).ok, entry
        label = f"{entry[0]}({', '.join(map(str, entry[1:]))})"
        (CORPUS_DIR / filename(entry)).write_text(f"# {label}\n" + P.to_text())
        print(filename(entry))
    return 0


if __name__ == "__main__":
    sys.exit(main())
