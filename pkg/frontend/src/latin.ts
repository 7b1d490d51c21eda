/** Latin-square counterbalancing. The per-preset condition orders are shared
 * constant tables generated by the host harness (same seeds), so browser
 * sessions sequence conditions identically to simulated ones; the square
 * constructions themselves are also implemented here for custom use. */

import presetOrders from "./presetOrders.json" with { type: "json" };

export interface Condition {
  technique: string;
  distance_m: number;
}

export interface PresetTable {
  master_seed: number;
  trials_per_cell: number;
  participants: number;
  conditions: Condition[];
  orders: number[][];
}

export const PRESET_ORDERS: Record<string, PresetTable> =
  (presetOrders as { presets: Record<string, PresetTable> }).presets;

/** Williams row-balanced Latin square (even n): every condition directly
 * follows every other exactly once. */
export function williamsSquare(n: number): number[][] {
  const first: number[] = [];
  let lo = 0;
  let hi = n - 1;
  for (let i = 0; i < n; i++) {
    first.push(i % 2 === 0 ? lo++ : hi--);
  }
  return Array.from({ length: n }, (_, r) => first.map((c) => (c + r) % n));
}

export function cyclicSquare(n: number): number[][] {
  return Array.from({ length: n }, (_, r) =>
    Array.from({ length: n }, (_, c) => (c + r) % n));
}

/** Condition sequence for a participant under a study preset. */
export function conditionOrder(preset: string, participant: number): Condition[] {
  const table = PRESET_ORDERS[preset];
  if (!table) throw new Error(`unknown preset ${preset}`);
  const row = table.orders[(participant - 1) % table.orders.length];
  return row.map((i) => table.conditions[i]);
}
