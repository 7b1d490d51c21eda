/** Experiment-config files (the harness JSON schema): uploading one into the
 * runner drives a custom session; the runner only needs the condition cells,
 * trial counts, and reach. */

import { Condition, cyclicSquare, williamsSquare } from "./latin.js";

export const CONFIG_SCHEMA_VERSION = 1;

export interface RunnerConfig {
  preset: string;
  task: "selection" | "docking" | "selection+docking";
  techniques: string[];
  distancesM: number[];
  trialsPerCell: number;
  armReachM: number;
  masterSeed: number;
}

export function parseConfig(text: string): RunnerConfig {
  const raw = JSON.parse(text);
  if (raw.schema_version !== CONFIG_SCHEMA_VERSION) {
    throw new Error(`schema_version: expected ${CONFIG_SCHEMA_VERSION}`);
  }
  const techniques: string[] = raw.techniques ?? [];
  const distances: number[] = raw.distances_m ?? [];
  if (!Array.isArray(techniques) || techniques.length === 0) {
    throw new Error("techniques: must be a non-empty list");
  }
  if (!Array.isArray(distances) || distances.some((d) => !(d > 0))) {
    throw new Error("distances_m: must be positive numbers");
  }
  return {
    preset: raw.preset ?? "custom",
    task: raw.task ?? "selection",
    techniques,
    distancesM: distances,
    trialsPerCell: Math.max(1, Number(raw.trials_per_cell ?? 1)),
    armReachM: Number(raw.arm_reach_m ?? 0.6),
    masterSeed: Number(raw.master_seed ?? 0),
  };
}

/** Counterbalanced condition order for one participant of a custom config:
 * a row of a Williams (even n) or cyclic (odd n) Latin square over the
 * technique x distance cells. */
export function customConditionOrder(config: RunnerConfig, participant: number): Condition[] {
  const conditions: Condition[] = [];
  for (const technique of config.techniques) {
    for (const distance of config.distancesM) {
      conditions.push({ technique, distance_m: distance });
    }
  }
  const n = conditions.length;
  if (n === 1) return conditions;
  const square = n % 2 === 0 ? williamsSquare(n) : cyclicSquare(n);
  const row = square[(participant - 1) % n];
  return row.map((i) => conditions[i]);
}
