"""Stand-in SMT solver for hermetic session tests.

Usage: fake_solver.py ANSWERS.json, where the file holds a list consumed one
entry per (check-sat): "unsat", "unknown", "hang", "crash", or
{"sat": "<get-model reply>"}.  A log of every received line is appended to
ANSWERS.json.log.
"""

import json
import sys
import time


def main():
    path = sys.argv[1]
    answers = json.load(open(path))
    log = open(path + ".log", "a")
    model = None
    for line in sys.stdin:
        log.write(line)
        log.flush()
        if "(check-sat)" in line:
            ans = answers.pop(0) if answers else "unsat"
            if ans == "hang":
                time.sleep(30)
            if ans == "crash":
                sys.exit(1)
            if isinstance(ans, dict):
                model = ans["sat"]
                print("sat", flush=True)
            else:
                print(ans, flush=True)
        elif "(get-model)" in line:
            print(model, flush=True)
        elif "(exit)" in line:
            return


if __name__ == "__main__":
    main()
