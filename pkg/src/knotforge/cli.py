"""Command-line entry point.

knotforge [--nog] [--script FILE] [--seed N] [--serve ADDR]

--nog reads commands from standard input without any graphics hooks
(`go` runs atomically).  --script runs a file first.  --serve starts
the web service for the browser viewer.  Exit status is nonzero only
for a duc-triggered abort.
"""

import argparse
import sys

from .interp import DieUponComplaint, ScriptExit, Session, run_line


def main(argv=None):
    ap = argparse.ArgumentParser(prog="knotforge")
    ap.add_argument("--nog", action="store_true",
                    help="no-graphics batch mode; read commands from stdin")
    ap.add_argument("--script", metavar="FILE",
                    help="script file to execute")
    ap.add_argument("--seed", type=int, default=1,
                    help="session random seed (default 1)")
    ap.add_argument("--serve", metavar="ADDR",
                    help="serve the viewer on host:port")
    args = ap.parse_args(argv)

    session = Session(seed=args.seed, headless=True)

    try:
        if args.script:
            try:
                with open(args.script, "r", encoding="utf-8") as fh:
                    text = fh.read()
            except OSError as exc:
                print("*** cannot read script: %s" % exc, file=sys.stderr)
                return 1
            try:
                for line in text.splitlines():
                    for entry in run_line(session, line):
                        print(entry)
            except ScriptExit:
                pass
        if args.serve:
            from .service import serve
            serve(session, args.serve)
            return 0
        if args.script:
            return 0
        # batch/REPL on stdin
        interactive = sys.stdin.isatty() and not args.nog
        while True:
            if interactive:
                try:
                    line = input("knotforge> ")
                except EOFError:
                    break
            else:
                line = sys.stdin.readline()
                if not line:
                    break
            try:
                for entry in run_line(session, line.rstrip("\n")):
                    print(entry)
            except ScriptExit:
                break
    except DieUponComplaint as exc:
        print(str(exc), file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
