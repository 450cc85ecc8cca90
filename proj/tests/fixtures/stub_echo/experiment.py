"""Scripted experiment used by the test suite.

stub_control.json holds:
  statuses: exit status per attempt; the last one repeats
  sleep_s:  seconds to sleep before exiting
  metrics:  object written verbatim to <out_dir>/final_info.json on success
Attempts are counted in .stub_attempts in the working directory.
"""
import argparse
import json
import os
import sys
import time

# EDITS BELOW


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--out_dir", required=True)
    args = parser.parse_args()
    if not os.path.isdir(args.out_dir):
        os.makedirs(args.out_dir, exist_ok=True)

    with open("stub_control.json") as f:
        control = json.load(f)
    attempts = 0
    if os.path.exists(".stub_attempts"):
        with open(".stub_attempts") as f:
            attempts = int(f.read().strip() or 0)
    with open(".stub_attempts", "w") as f:
        f.write(str(attempts + 1))

    statuses = control.get("statuses", [0]) or [0]
    status = statuses[min(attempts, len(statuses) - 1)]
    time.sleep(float(control.get("sleep_s", 0)))
    print(f"attempt {attempts + 1} status {status}")
    if status != 0:
        print(f"scripted failure on attempt {attempts + 1}", file=sys.stderr)
        sys.exit(status)
    with open(os.path.join(args.out_dir, "final_info.json"), "w") as f:
        json.dump(control.get("metrics", {}), f)


if __name__ == "__main__":
    main()
