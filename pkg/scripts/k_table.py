"""Render the table of star radii K and ball sizes for the docs."""

import argparse

from bandlab.cayley import k_table


HEADERS = {
    "level": ":math:`n`",
    "K": ":math:`K`",
    "subgroup_order": ":math:`2^n`",
    "ball_size": ":math:`|B(K)|`",
}


def to_rst(df, title="Star radius K per level"):
    """One ``list-table`` row per level, headed by the math symbols."""
    lines = [f".. list-table:: {title}", "   :header-rows: 1", ""]
    for i, col in enumerate(df.columns):
        lines.append(f"   {'* -' if i == 0 else '  -'} {HEADERS.get(col, col)}")
    for record in df.itertuples(index=False):
        for i, value in enumerate(record):
            lines.append(f"   {'* -' if i == 0 else '  -'} {value}")
    return "\n".join(lines) + "\n"


def to_latex(df, caption="Star radius K per level"):
    out = []
    out.append(r"\begin{table}[ht]")
    out.append(r"\centering")
    out.append(rf"\caption{{{caption}}}")
    out.append(r"\begin{tabular}{rrrr}")
    out.append(r"\hline")
    out.append(r"$n$ & $K$ & $2^n$ & $|B(K)|$\\")
    out.append(r"\hline")
    for _, row in df.iterrows():
        out.append(
            rf"{row['level']} & {row['K']} & {row['subgroup_order']} & {row['ball_size']} \\"
        )
    out.append(r"\hline")
    out.append(r"\end{tabular}")
    out.append(r"\end{table}")
    return "\n".join(out)


if __name__ == "__main__":
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--levels", type=int, nargs="+", default=[1, 2, 3])
    parser.add_argument("--prefix", default="k_table")
    args = parser.parse_args()

    df = k_table(args.levels)

    with open(f"{args.prefix}.rst", "w") as f:
        f.write(to_rst(df))

    with open(f"{args.prefix}.tex", "w") as f:
        f.write(to_latex(df))
