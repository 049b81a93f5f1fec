#!/usr/bin/env python3
# Copyright 2026 The lexipipe Authors
# SPDX-License-Identifier: Apache-2.0
"""Convert a CNN/Daily Mail CSV split into a lexipipe corpus.

Expects the common Kaggle/Hugging Face export with columns id, article and
highlights. Highlights become the reference summary, one sentence per
bullet. Rows with an empty article or summary are skipped.
"""

import argparse
import csv
import json
import sys


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("csv_path")
    parser.add_argument("-o", "--out", default="-")
    parser.add_argument("-n", "--limit", type=int, default=0,
                        help="stop after this many articles (0 = all)")
    args = parser.parse_args()

    csv.field_size_limit(sys.maxsize)
    out = sys.stdout if args.out == "-" else open(args.out, "w", encoding="utf-8")
    written = 0
    with open(args.csv_path, newline="", encoding="utf-8") as f:
        for row in csv.DictReader(f):
            article = row.get("article", "").strip()
            bullets = [b.strip() for b in row.get("highlights", "").splitlines()]
            bullets = [b if b.endswith((".", "!", "?")) else b + "."
                       for b in bullets if b]
            if not article or not bullets:
                continue
            out.write(json.dumps({
                "id": row.get("id") or f"cnndm-{written:06d}",
                "article": article,
                "reference_summary": " ".join(bullets),
            }) + "\n")
            written += 1
            if args.limit and written >= args.limit:
                break
    if out is not sys.stdout:
        out.close()
    print(f"wrote {written} articles", file=sys.stderr)


if __name__ == "__main__":
    main()
