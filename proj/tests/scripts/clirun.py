"""Small helpers shared by the CLI contract scripts."""

import json
import os
import subprocess


def run(cli, args, cwd, env_extra=None):
    env = dict(os.environ)
    env.pop("TRINOID_CONFIG", None)
    if env_extra:
        env.update(env_extra)
    return subprocess.run([cli, *args], cwd=cwd, env=env, capture_output=True, text=True, timeout=600)


def stdout_json(proc):
    return json.loads(proc.stdout)


class Failures:
    def __init__(self):
        self.items = []

    def check(self, ok, what):
        if not ok:
            self.items.append(what)
            print(f"FAIL {what}")
        return ok

    def finish(self, name):
        if self.items:
            print(f"{name}: {len(self.items)} failure(s)")
            return 1
        print(f"{name}: ok")
        return 0
