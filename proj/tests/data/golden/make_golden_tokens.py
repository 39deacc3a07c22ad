"""Regenerates tokens.json from independent reference lexers.

Python files go through the standard library's `tokenize` module, Java files
through `javalang.tokenizer`. Comments, newlines and indentation tokens are
dropped. Run from this directory:  python3 make_golden_tokens.py
"""
import io
import json
import pathlib
import tokenize

import javalang

SKIP = {tokenize.COMMENT, tokenize.NL, tokenize.NEWLINE, tokenize.INDENT,
        tokenize.DEDENT, tokenize.ENDMARKER, tokenize.ENCODING}


def python_tokens(source):
    toks = tokenize.generate_tokens(io.StringIO(source).readline)
    return [t.string for t in toks if t.type not in SKIP]


def java_tokens(source):
    return [t.value for t in javalang.tokenizer.tokenize(source)]


def main():
    here = pathlib.Path(__file__).parent
    golden = {}
    for path in sorted((here / "python").glob("*.py")):
        golden["python/" + path.name] = python_tokens(path.read_text())
    for path in sorted((here / "java").glob("*.java")):
        golden["java/" + path.name] = java_tokens(path.read_text())
    (here / "tokens.json").write_text(json.dumps(golden, indent=1) + "\n")


if __name__ == "__main__":
    main()
