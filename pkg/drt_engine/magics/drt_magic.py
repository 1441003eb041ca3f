# Copyright 2026 the drt-engine contributors
# SPDX-License-Identifier: BSD-3-Clause

"""%drt / %%drt magic commands for running scenes from a notebook."""

import shlex
import tempfile
from pathlib import Path

from IPython.core.magic import Magics, cell_magic, line_magic, magics_class
from IPython.display import Markdown, display

from ..cli import main
from ..errors import DRTError
from ..scene.parser import parse_scene


def _summary(command: str, status: int, out: Path) -> str:
    lines = [f"**drt {command}** finished with exit status `{status}`", ""]
    if out.is_dir():
        files = sorted(p.name for p in out.iterdir() if p.is_file())
        if files:
            lines.append(f"Outputs in `{out}`:")
            lines.extend(f"- `{name}`" for name in files)
    return "\n".join(lines)


def _out_dir(argv) -> Path:
    if "--out" in argv:
        i = argv.index("--out")
        if i + 1 < len(argv):
            return Path(argv[i + 1])
    return Path("out")


@magics_class
class DRTMagics(Magics):
    """Magic commands for drt-engine."""

    @line_magic
    def drt(self, line):
        """Run the drt command line.

        Usage:
            %drt run --scene scenarios/canyon.scn --span 5 --step 0.2 --tc 0,3
            %drt validate --seed 42 --samples 50
        """
        argv = shlex.split(line)
        if not argv:
            display(Markdown("❌ **Error**: expected `run ...` or `validate ...`"))
            return None
        status = main(argv)
        display(Markdown(_summary(argv[0], status, _out_dir(argv))))
        return status

    @cell_magic("drt")
    def drt_cell(self, line, cell):
        """Run a scene given inline as the cell body.

        Usage:
            %%drt --mode drt --span 5 --step 0.2 --tc auto
            GEOMETRY
            ...
        """
        try:
            parse_scene(cell)
        except DRTError as e:
            display(Markdown(f"❌ **Error**: {str(e)}"))
            return None
        with tempfile.TemporaryDirectory(prefix="drt-") as tmp:
            scene_path = Path(tmp) / "cell.scn"
            scene_path.write_text(cell, encoding="utf-8")
            argv = ["run", "--scene", str(scene_path)] + shlex.split(line)
            status = main(argv)
        display(Markdown(_summary("run", status, _out_dir(argv))))
        return status


def load_ipython_extension(ipython):
    """Load the extension in IPython."""
    ipython.register_magics(DRTMagics)
