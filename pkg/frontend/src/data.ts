// Loads one figure's inputs: trajectory CSVs sharing a time grid, the
// coefficient table, and the sweep report JSON.

import * as fs from 'fs';
import * as path from 'path';

import { CsvTable, column, parseCsv } from './csv';

export interface TrajectorySeries {
  file: string;
  kind: 'mass' | 'candidate';
  label: string;
  mass?: number;
  t: number[];
  x: number[];
}

export interface CoefficientTable {
  x: number[];
  gamma: number[];
  sigma: number[];
}

export interface ReportSummary {
  candidates: string[];
  masses: number[];
  winner: Record<string, string>;
}

export interface FigureInputs {
  coefficients: CoefficientTable;
  masses: TrajectorySeries[];
  candidates: TrajectorySeries[];
  report: ReportSummary;
}

function readTable(file: string): CsvTable {
  if (!fs.existsSync(file)) {
    throw new Error(`missing input file: ${file}`);
  }
  return parseCsv(fs.readFileSync(file, 'utf8'), file);
}

function toSeries(table: CsvTable): TrajectorySeries {
  const t = column(table, 't');
  const x = column(table, 'x');
  if ('candidate' in table.meta) {
    return { file: table.file, kind: 'candidate', label: table.meta['candidate'], t, x };
  }
  const mass = Number(table.meta['mass']);
  if (!Number.isFinite(mass)) {
    throw new Error(`${table.file}: trajectory metadata has neither candidate nor mass`);
  }
  return { file: table.file, kind: 'mass', label: `m = ${mass}`, mass, t, x };
}

export function loadReport(file: string): ReportSummary {
  if (!fs.existsSync(file)) {
    throw new Error(`missing input file: ${file}`);
  }
  const raw = JSON.parse(fs.readFileSync(file, 'utf8'));
  return {
    candidates: raw.candidates ?? [],
    masses: raw.masses ?? [],
    winner: raw.summary?.winner ?? {},
  };
}

export function loadFigureInputs(reportPath: string, trajDir: string): FigureInputs {
  const report = loadReport(reportPath);
  if (!fs.existsSync(trajDir)) {
    throw new Error(`missing trajectory directory: ${trajDir}`);
  }
  const names = fs.readdirSync(trajDir).filter((n) => n.startsWith('traj_') && n.endsWith('.csv'));
  names.sort();
  const series = names.map((n) => toSeries(readTable(path.join(trajDir, n))));
  const masses = series.filter((s) => s.kind === 'mass');
  const candidates = series.filter((s) => s.kind === 'candidate');
  if (masses.length === 0) {
    throw new Error(`${trajDir}: no mass trajectories (traj_mass_*.csv)`);
  }
  if (candidates.length === 0) {
    throw new Error(`${trajDir}: no candidate trajectories (traj_candidate_*.csv)`);
  }
  // all curves must live on one time grid after the simulator's subsampling
  const first = series[0];
  for (const s of series) {
    if (s.t.length !== first.t.length) {
      throw new Error(`${s.file}: time grid length ${s.t.length} differs from ${first.file}`);
    }
    const last = s.t[s.t.length - 1];
    const ref = first.t[first.t.length - 1];
    if (Math.abs(last - ref) > 1e-9 * Math.max(1, Math.abs(ref))) {
      throw new Error(`${s.file}: time horizon ${last} differs from ${first.file}`);
    }
  }
  // largest mass first so the grey ramp darkens toward the limit
  masses.sort((a, b) => (b.mass ?? 0) - (a.mass ?? 0));
  const coeff = readTable(path.join(trajDir, 'coefficients.csv'));
  const coefficients = {
    x: column(coeff, 'x'),
    gamma: column(coeff, 'gamma'),
    sigma: column(coeff, 'sigma'),
  };
  return { coefficients, masses, candidates, report };
}

export interface LambdaRow {
  lambda: number;
  alpha: number;
}

export function loadLambdaTable(file: string): LambdaRow[] {
  const table = readTable(file);
  const lambda = column(table, 'lambda');
  const alpha = column(table, 'alpha');
  return lambda.map((l, i) => ({ lambda: l, alpha: alpha[i] }));
}
