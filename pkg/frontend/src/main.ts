#!/usr/bin/env node
/**
 * CLI: render --in <csv> --kind <kind> --out <svg>
 */

import { FigureKind, KINDS, render } from "./render";

function usage(): string {
  return `usage: render --in <csv> --kind <${KINDS.join("|")}> --out <svg>`;
}

export function main(argv: string[]): number {
  if (argv[0] !== "render") {
    console.error(usage());
    return 1;
  }
  const args = new Map<string, string>();
  for (let i = 1; i < argv.length; i += 2) {
    const key = argv[i];
    const value = argv[i + 1];
    if (!key.startsWith("--") || value === undefined) {
      console.error(usage());
      return 1;
    }
    args.set(key.slice(2), value);
  }
  const input = args.get("in");
  const kind = args.get("kind");
  const output = args.get("out");
  if (!input || !kind || !output) {
    console.error(usage());
    return 1;
  }
  if (!(KINDS as readonly string[]).includes(kind)) {
    console.error(`unknown kind '${kind}'; expected one of ${KINDS.join(", ")}`);
    return 1;
  }
  try {
    render({ inputCsv: input, kind: kind as FigureKind, outputPath: output });
  } catch (err) {
    console.error(`error: ${err instanceof Error ? err.message : String(err)}`);
    return 1;
  }
  console.log(`wrote ${output}`);
  return 0;
}

if (require.main === module) {
  process.exit(main(process.argv.slice(2)));
}
