"""Drive the command line end to end on JSON map documents.

Everything here goes through ``traintrack.cli.main`` exactly as the shell
would: generate a family document, analyze it, tighten a hand-written
document until it parses, and render a DOT export.  Each call's exit code
is shown next to its output.
"""

import json
import tempfile

from traintrack.cli import main
from traintrack import samples
from traintrack.cli import document_from_map, document_text


def call(argv, title):
    print()
    print("$ traintrack " + " ".join(argv))
    code = main(argv)
    print("[exit %d]  # %s" % (code, title))
    return code


def main_demo():
    with tempfile.TemporaryDirectory() as tmp:
        qe = tmp + "/qe_rose.json"
        with open(qe, "w") as fh:
            fh.write(document_text(document_from_map(samples.qe_rose())))

        call(["strata", qe], "filtration with classifications")
        call(["rank", qe], "lattice rank summary")
        call(["verify-commute", qe, "--a", "1,1", "--b", "2,2"],
             "a commuting admissible pair")
        call(["verify-commute", qe, "--a", "1,2", "--b", "2,2"],
             "an inadmissible tuple is a verification failure")

        # documents can declare data; it is re-verified, never trusted
        doc = json.loads(document_text(document_from_map(samples.qe_rose())))
        doc["nielsen_paths"] = ["E2 E1"]  # not actually fixed by the map
        bad = tmp + "/bad.json"
        with open(bad, "w") as fh:
            json.dump(doc, fh)
        call(["rank", bad], "a wrong declaration is an input error")

        swap = tmp + "/swap_rose.json"
        with open(swap, "w") as fh:
            fh.write(document_text(document_from_map(samples.swap_rose())))
        call(["check-ct", swap], "period-two directions fail clause (R)")

        call(["export-dot", qe], "DOT export, strata color-coded")

    print()
    print("$ traintrack gen type-e --n 3  " "| traintrack rank")
    import io, sys
    buf = io.StringIO()
    old_stdout, sys.stdout = sys.stdout, buf
    try:
        main(["gen", "type-e", "--n", "3"])
    finally:
        sys.stdout = old_stdout
    old_stdin, sys.stdin = sys.stdin, io.StringIO(buf.getvalue())
    try:
        code = main(["rank"])
    finally:
        sys.stdin = old_stdin
    print("[exit %d]  # generated family document piped straight back in" % code)


if __name__ == "__main__":
    main_demo()
