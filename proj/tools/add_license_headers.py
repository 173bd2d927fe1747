#!/usr/bin/env python3
# Copyright 2026 The fnslab Authors
# SPDX-License-Identifier: Apache-2.0
#
# Licensed under the Apache License, Version 2.0 (the "License"); you may not
# use this file except in compliance with the License. You may obtain a copy at
# http://www.apache.org/licenses/LICENSE-2.0

"""Prepend the Apache-2.0 header to project sources. Safe to rerun."""

import argparse
import pathlib
import sys

HEADER = [
    "Copyright 2026 The fnslab Authors",
    "SPDX-License-Identifier: Apache-2.0",
    "",
    "Licensed under the Apache License, Version 2.0 (the \"License\"); you may not",
    "use this file except in compliance with the License. You may obtain a copy at",
    "http://www.apache.org/licenses/LICENSE-2.0",
]

ROOTS = ["include", "src", "tests", "tools", "python"]
SKIP_DIRS = {"build", "vendor", "examples", "__pycache__", ".git"}
SLASH = {".cpp", ".hpp", ".h", ".cc"}
HASH = {".py", ".cmake", ".toml"}


def comment_style(path):
    if path.suffix in SLASH:
        return "//"
    if path.suffix in HASH or path.name == "CMakeLists.txt":
        return "#"
    return None


def candidates(repo):
    yield repo / "CMakeLists.txt"
    yield repo / "pyproject.toml"
    for root in ROOTS:
        for p in sorted((repo / root).rglob("*")):
            if p.is_file() and not SKIP_DIRS.intersection(p.relative_to(repo).parts):
                yield p


def with_header(text, marker):
    block = "".join(f"{marker} {line}".rstrip() + "\n" for line in HEADER) + "\n"
    if "SPDX-License-Identifier: Apache-2.0" in text.split("\n\n", 1)[0]:
        return None
    if text.startswith("#!"):
        shebang, _, rest = text.partition("\n")
        return shebang + "\n" + block + rest
    return block + text


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repo", type=pathlib.Path, default=pathlib.Path(__file__).resolve().parents[1])
    ap.add_argument("--check", action="store_true", help="list files missing the header and exit 1")
    args = ap.parse_args()

    missing = []
    for path in candidates(args.repo):
        marker = comment_style(path)
        if marker is None or not path.exists():
            continue
        updated = with_header(path.read_text(), marker)
        if updated is None:
            continue
        missing.append(path)
        if not args.check:
            path.write_text(updated)
    for path in missing:
        print(path.relative_to(args.repo))
    return 1 if args.check and missing else 0


if __name__ == "__main__":
    sys.exit(main())
