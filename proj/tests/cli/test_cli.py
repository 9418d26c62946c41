"""Command-line contract checks: exit codes, strict configs, byte determinism, sidecar replay."""

import json
import os
import shutil
import subprocess
import sys
import unittest

CLI = None
WORK = None

FAST = {
    "dispersion": ["--modes", "0,1", "--k_points", "60", "--k_max", "20"],
    "se-rate": ["--modes", "1", "--k_points", "120", "--k_max", "20", "--omega0_points", "101"],
    "decay": ["--t_max", "5"],
    "noise": ["--omega_points", "41"],
    "noise-map": ["--omega_points", "21", "--delta_points", "21"],
    "retard": ["--omega_points", "41", "--r", "1.9", "--theta", "3.5"],
    "phonon": ["--c_l", "2", "--c_t", "1", "--q_points", "41", "--branches", "3"],
}

HEADERS = {
    "dispersion": "n,k_z,re_omega,im_omega,bound",
    "se-rate": "omega0,rate,is_singular",
    "decay": "t,re_b,im_b,population",
    "noise": "omega,fano",
    "noise-map": "omega,delta,fano",
    "retard": "omega,fano",
    "phonon": "family,branch_index,q_parallel_w,omega_w_over_ct",
}


def run(*args):
    return subprocess.run([CLI, *args], capture_output=True, text=True)


def read(path):
    with open(path, "rb") as f:
        return f.read()


class Contract(unittest.TestCase):
    def out(self, name):
        d = os.path.join(WORK, self.id().split(".")[-1], name)
        shutil.rmtree(d, ignore_errors=True)
        return d

    def test_every_command_deterministic_and_replayable(self):
        for cmd, extra in FAST.items():
            with self.subTest(cmd=cmd):
                a, b, c = self.out(cmd + "_a"), self.out(cmd + "_b"), self.out(cmd + "_c")
                r = run(cmd, *extra, "--output_dir", a)
                self.assertEqual(r.returncode, 0, r.stderr)
                r = run(cmd, *extra, "--output_dir", b)
                self.assertEqual(r.returncode, 0, r.stderr)
                csv = [f for f in sorted(os.listdir(a)) if f.endswith(".csv")]
                self.assertIn(cmd + ".csv", csv)
                for f in csv:
                    self.assertEqual(read(os.path.join(a, f)), read(os.path.join(b, f)), f)

                lines = read(os.path.join(a, cmd + ".csv")).decode().splitlines()
                body = [l for l in lines if not l.startswith("#")]
                self.assertEqual(body[0], HEADERS[cmd])
                self.assertGreater(len(body), 1)

                side = json.loads(read(os.path.join(a, cmd + ".json")))
                self.assertEqual(sorted(side), ["command", "resolved_config", "version", "wall_time"])
                self.assertEqual(side["command"], cmd)

                r = run(cmd, "--config", os.path.join(a, cmd + ".json"), "--output_dir", c)
                self.assertEqual(r.returncode, 0, r.stderr)
                for f in csv:
                    self.assertEqual(read(os.path.join(a, f)), read(os.path.join(c, f)), f)

    def test_seventeen_digits(self):
        d = self.out("digits")
        self.assertEqual(run("decay", "--t_max", "5", "--output_dir", d).returncode, 0)
        row = read(os.path.join(d, "decay.csv")).decode().splitlines()[2].split(",")
        self.assertEqual(row[0], "0.01")
        self.assertGreaterEqual(len(row[3].replace("0.", "", 1).lstrip("0")), 15)

    def test_unknown_key_in_file(self):
        d = self.out("unknown")
        os.makedirs(d)
        cfg = os.path.join(d, "cfg.json")
        with open(cfg, "w") as f:
            json.dump({"delta": 0.1, "detla": 0.2}, f)
        r = run("decay", "--config", cfg, "--output_dir", d)
        self.assertEqual(r.returncode, 2)
        self.assertIn("detla", r.stderr)

    def test_unknown_flag(self):
        self.assertEqual(run("decay", "--detla", "0.2").returncode, 2)

    def test_bad_values(self):
        d = self.out("bad")
        self.assertEqual(run("decay", "--delta", "abc", "--output_dir", d).returncode, 2)
        self.assertEqual(run("decay", "--t_max", "2", "--output_dir", d).returncode, 2)
        self.assertEqual(run("noise", "--delta", "0", "--omega_points", "41", "--output_dir", d).returncode, 2)
        self.assertEqual(run("phonon", "--c_l", "2", "--output_dir", d).returncode, 2)
        self.assertEqual(run("phonon", "--c_l", "1", "--c_t", "1", "--output_dir", d).returncode, 2)
        self.assertEqual(run("se-rate", "--omega0_min", "0.9", "--omega0_max", "0.95",
                             "--modes", "1", "--output_dir", d).returncode, 2)

    def test_sidecar_of_other_command(self):
        d = self.out("other")
        self.assertEqual(run("decay", "--t_max", "5", "--output_dir", d).returncode, 0)
        r = run("noise", "--config", os.path.join(d, "decay.json"))
        self.assertEqual(r.returncode, 2)

    def test_flags_override_file(self):
        d = self.out("override")
        os.makedirs(d)
        cfg = os.path.join(d, "cfg.json")
        with open(cfg, "w") as f:
            json.dump({"delta": 0.1, "t_max": 5}, f)
        self.assertEqual(run("decay", "--config", cfg, "--delta", "0.3", "--output_dir", d).returncode, 0)
        side = json.loads(read(os.path.join(d, "decay.json")))
        self.assertEqual(side["resolved_config"]["delta"], 0.3)
        self.assertEqual(side["resolved_config"]["t_max"], 5)

    def test_solver_error(self):
        # too coarse a step for the Volterra cross-check
        r = run("decay", "--dt", "0.05", "--output_dir", self.out("solver"))
        self.assertEqual(r.returncode, 3, r.stderr)

    def test_io_errors(self):
        d = self.out("io")
        os.makedirs(d)
        blocker = os.path.join(d, "file")
        with open(blocker, "w") as f:
            f.write("x")
        self.assertEqual(run("decay", "--t_max", "5", "--output_dir", os.path.join(blocker, "sub")).returncode, 4)
        self.assertEqual(run("decay", "--config", os.path.join(d, "missing.json")).returncode, 4)

    def test_help(self):
        r = run("--help")
        self.assertEqual(r.returncode, 0)
        for cmd in FAST:
            self.assertIn(cmd, r.stdout)


if __name__ == "__main__":
    CLI = os.path.abspath(sys.argv[1])
    WORK = os.path.abspath(sys.argv[2])
    os.makedirs(WORK, exist_ok=True)
    unittest.main(argv=[sys.argv[0], "-v"])
