"""``cyclochern run MANIFEST`` and ``cyclochern diff A B``."""

from __future__ import annotations

import argparse
import json
import sys

from .manifest import ManifestError, RunFlags, SchemaMismatch, diff_reports, run_manifest


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cyclochern")
    sub = p.add_subparsers(dest="command", required=True)
    r = sub.add_parser("run", help="execute a manifest and emit a report")
    r.add_argument("manifest")
    r.add_argument("--cap", type=int, default=None, help="global form-degree cap")
    r.add_argument("--sign-convention", choices=["alternating", "plain"], default=None)
    r.add_argument("--output", default=None, help="write the JSON report here")
    r.add_argument("--quiet", action="store_true")
    d = sub.add_parser("diff", help="compare two reports, ignoring timing")
    d.add_argument("a")
    d.add_argument("b")
    return p


def _summary_line(block: dict) -> str:
    line = f"[{block['status']:>5}] {block['id']} ({block['kind']})"
    if block.get("error"):
        line += f": {block['error']}"
    else:
        failed = [a["name"] for a in block["assertions"] if not a["passed"]]
        if failed:
            line += ": failed " + ", ".join(failed)
    return line


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    if args.command == "run":
        flags = RunFlags(args.cap, args.sign_convention, args.output, args.quiet)
        try:
            report = run_manifest(args.manifest, flags)
        except (ManifestError, SchemaMismatch, OSError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
        if not args.quiet:
            for block in report["tasks"]:
                print(_summary_line(block))
            s = report["summary"]
            print(f"{s['passed']} passed, {s['failed']} failed")
            if not args.output:
                print(json.dumps(report, indent=2, sort_keys=True))
        return 0 if report["summary"]["ok"] else 1
    try:
        with open(args.a) as fa, open(args.b) as fb:
            a, b = json.load(fa), json.load(fb)
        diffs = diff_reports(a, b)
    except (SchemaMismatch, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    for d in diffs:
        print(f"{d['path']}: {json.dumps(d['a'])} != {json.dumps(d['b'])}")
    return 1 if diffs else 0


if __name__ == "__main__":
    sys.exit(main())
