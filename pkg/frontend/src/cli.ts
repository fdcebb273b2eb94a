#!/usr/bin/env node
import { readFileSync, writeFileSync } from "node:fs";
import yargs from "yargs";
import { hideBin } from "yargs/helpers";
import { KINDS, render } from "./index.js";

/** Exit codes follow the producing CLI: 0 success, 1 render failure,
 * 2 usage error (unknown kind, wrong arity, unreadable input). */
async function main(): Promise<number> {
  const argv = await yargs(hideBin(process.argv))
    .scriptName("kdm-plots")
    .command("$0 <kind> <files..>", "render kdm CSV artifacts to SVG", (y) =>
      y
        .positional("kind", {
          describe: `figure kind (${Object.keys(KINDS).join(" | ")})`,
          type: "string",
          demandOption: true,
        })
        .positional("files", {
          describe: "input CSV files, in the order the kind expects",
          type: "string",
          array: true,
          demandOption: true,
        }),
    )
    .option("out", {
      alias: "o",
      type: "string",
      demandOption: true,
      describe: "output SVG path",
    })
    .strict()
    .fail((msg, err) => {
      process.stderr.write(`${msg ?? err?.message}\n`);
      process.exit(2);
    })
    .parse();

  const kind = argv.kind as string;
  const files = argv.files as string[];
  if (KINDS[kind] === undefined || files.length !== KINDS[kind]!.inputs.length) {
    const spec = KINDS[kind];
    process.stderr.write(
      spec === undefined
        ? `unknown figure kind "${kind}" (have: ${Object.keys(KINDS).join(", ")})\n`
        : `${kind} needs ${spec.inputs.length} input(s): ${spec.inputs.join("; ")}\n`,
    );
    return 2;
  }
  let texts: string[];
  try {
    texts = files.map((f) => readFileSync(f, "utf8"));
  } catch (e) {
    process.stderr.write(`${(e as Error).message}\n`);
    return 2;
  }
  try {
    writeFileSync(argv.out, render(kind, texts));
  } catch (e) {
    process.stderr.write(`render failed: ${(e as Error).message}\n`);
    return 1;
  }
  process.stderr.write(`wrote ${argv.out}\n`);
  return 0;
}

process.exit(await main());
