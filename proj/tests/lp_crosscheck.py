"""Solve exported LP files with HiGHS and compare against the exact solver.

usage: lp_crosscheck.py <railsched> <work-dir> <instance.json>...
"""
import pathlib
import re
import subprocess
import sys
from fractions import Fraction

import highspy


def main():
    exe, work = sys.argv[1], pathlib.Path(sys.argv[2])
    work.mkdir(parents=True, exist_ok=True)
    failures = 0
    for inst in sys.argv[3:]:
        name = pathlib.Path(inst).stem
        lp = work / f"{name}.lp"
        subprocess.run([exe, "build", inst, "--lp", str(lp)], check=True, capture_output=True)
        out = subprocess.run([exe, "solve-exact", inst, "--budget", "60"], capture_output=True, text=True)
        if out.returncode != 0:
            exact = None
        else:
            exact = Fraction(re.search(r"objective (\S+)", out.stdout).group(1))
        constant = Fraction(re.search(r"^\\ constant: (\S+)$", lp.read_text(), re.M).group(1))

        h = highspy.Highs()
        h.setOptionValue("output_flag", False)
        h.setOptionValue("mip_rel_gap", 0.0)
        h.readModel(str(lp))
        h.run()
        status = h.modelStatusToString(h.getModelStatus())
        if exact is None:
            ok = status == "Infeasible"
            got = status
        else:
            got = h.getInfo().objective_function_value + float(constant)
            ok = status == "Optimal" and abs(got - float(exact)) < 1e-6
        print(f"{'PASS' if ok else 'FAIL'} {name}: highs={got} exact={exact}")
        failures += not ok
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
