#!/usr/bin/env node
// plot-figure: render simulator artifacts to SVG.
//
//   plot-figure --report report.json --trajectories DIR --out fig.svg [--inset t0:t1]
//   plot-figure --lambda lambda_alpha.csv --out lambda.svg

import * as fs from 'fs';
import * as path from 'path';

import { loadFigureInputs, loadLambdaTable } from './data';
import { RenderOptions, renderFigure, renderLambdaFigure } from './figure';

interface Args {
  report?: string;
  trajectories?: string;
  out?: string;
  inset?: string;
  lambda?: string;
}

function parseArgs(argv: string[]): Args {
  const args: Args = {};
  const flags: Record<string, keyof Args> = {
    '--report': 'report',
    '--trajectories': 'trajectories',
    '--out': 'out',
    '--inset': 'inset',
    '--lambda': 'lambda',
  };
  for (let i = 0; i < argv.length; i++) {
    const token = argv[i];
    const eq = token.indexOf('=');
    if (eq > 0 && token.slice(0, eq) in flags) {
      args[flags[token.slice(0, eq)]] = token.slice(eq + 1);
      continue;
    }
    const key = flags[token];
    if (!key) {
      throw new Error(`unknown argument: ${token}`);
    }
    if (i + 1 >= argv.length) {
      throw new Error(`${token} needs a value`);
    }
    args[key] = argv[++i];
  }
  return args;
}

function parseInset(spec: string): RenderOptions {
  const parts = spec.split(':');
  const t0 = Number(parts[0]);
  const t1 = Number(parts[1]);
  if (parts.length !== 2 || !Number.isFinite(t0) || !Number.isFinite(t1)) {
    throw new Error(`--inset expects t0:t1, got '${spec}'`);
  }
  return { insetT0: t0, insetT1: t1 };
}

export function run(argv: string[]): number {
  const args = parseArgs(argv);
  if (!args.out) {
    throw new Error('--out is required');
  }
  if (path.extname(args.out).toLowerCase() === '.png') {
    throw new Error('PNG output is not supported in this build; write an .svg path');
  }
  let svg: string;
  if (args.lambda) {
    svg = renderLambdaFigure(loadLambdaTable(args.lambda));
  } else {
    if (!args.report || !args.trajectories) {
      throw new Error('--report and --trajectories are required (or use --lambda)');
    }
    const options = args.inset ? parseInset(args.inset) : {};
    svg = renderFigure(loadFigureInputs(args.report, args.trajectories), options);
  }
  fs.mkdirSync(path.dirname(path.resolve(args.out)), { recursive: true });
  fs.writeFileSync(args.out, svg);
  console.log(`wrote ${args.out}`);
  return 0;
}

if (require.main === module) {
  try {
    process.exit(run(process.argv.slice(2)));
  } catch (err) {
    console.error(`plot-figure: ${err instanceof Error ? err.message : err}`);
    process.exit(1);
  }
}
