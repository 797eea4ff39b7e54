"""Documented CLI invocations: extraction from the README and golden capture."""

import contextlib
import hashlib
import io
import os
import re
import shlex

from pw1d.cli import main

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
README = os.path.join(ROOT, "README.md")
DATA = os.path.join(ROOT, "tests", "data")
GOLDEN = os.path.join(ROOT, "tests", "golden")
BLOCK = re.compile(r"```console\n(.*?)```", re.S)


def commands(text=None):
    """The ``$ pw1d ...`` lines of every console block, in order."""
    text = open(README, encoding="utf-8").read() if text is None else text
    return [line[2:] for block in BLOCK.findall(text)
            for line in block.splitlines() if line.startswith("$ pw1d ")]


def run(command):
    """Run one documented command from the data directory: (exit, stdout, stderr)."""
    argv = shlex.split(command)[1:]
    out, err = io.StringIO(), io.StringIO()
    with contextlib.chdir(DATA) if hasattr(contextlib, "chdir") else _cwd(DATA):
        code = main(argv, out, err)
    return code, out.getvalue(), err.getvalue()


@contextlib.contextmanager
def _cwd(path):
    old = os.getcwd()
    os.chdir(path)
    try:
        yield
    finally:
        os.chdir(old)


def transcript(command):
    """What the README shows for a command: its stdout then its stderr."""
    code, out, err = run(command)
    return code, out + err


def golden_path(command):
    words = [w for w in re.split(r"[^a-z0-9]+", command.lower()) if w][:5]
    digest = hashlib.sha1(command.encode()).hexdigest()[:8]
    return os.path.join(GOLDEN, "-".join(words[1:]) + f"-{digest}.txt")


def golden_text(command):
    code, text = transcript(command)
    return f"$ {command}\nexit {code}\n{text}"


def render_readme(text):
    """Fill every console block with the current transcripts."""
    def fill(match):
        lines = []
        for line in match.group(1).splitlines():
            if line.startswith("$ pw1d "):
                lines.append(line)
                lines.append(transcript(line[2:])[1].rstrip("\n"))
        return "```console\n" + "\n".join(lines) + "\n```"
    return BLOCK.sub(fill, text)
