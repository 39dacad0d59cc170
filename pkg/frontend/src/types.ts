// Shapes of the service API payloads and the static content pack.

export interface GameEvent {
  seq: number;
  kind: string;
  payload: Record<string, unknown>;
}

export interface HintView {
  id: string;
  quest_id: string;
  text: string;
  figure_asset_id: string;
  voiceover_transcript: string;
  collected: boolean;
  projected: boolean;
}

export interface QuestView {
  id: string;
  title: string;
  kind: "Minor" | "Major";
  status: "Active" | "Completed";
}

export interface DeskView {
  orientation: string;
  month: number;
  hour: number;
  location: string;
  cooling_enabled: boolean;
  shades_on: boolean;
  setpoint_heating: number;
  setpoint_cooling: number;
  window_u: number;
  shgc: number;
}

export interface BenchLayerView {
  material: string;
  thickness: number;
  placed: boolean;
}

export interface WallDict {
  system: string;
  layers: { material: string; thickness: number }[];
}

export interface EnergyView {
  heating: number;
  cooling: number;
  total: number;
  rating: string;
}

export interface GadgetReportView {
  u_value: number;
  u_value_ok: boolean;
  mold: "None" | "Light" | "Moderate" | "Heavy";
  cost_per_m2: number;
  cost_tier: "Cheap" | "Medium" | "Expensive";
  stability: "NoCracks" | "MinorCracks" | "SevereCracks" | "Collapse";
  energy: EnergyView | null;
}

export interface StateView {
  session_id: string;
  scenario_id: string;
  scenario_title: string;
  quests: QuestView[];
  inactive_quests: number;
  hints: HintView[];
  locks_unlocked: number;
  door_open: boolean;
  desk: DeskView;
  bench: {
    spawned: BenchLayerView[];
    assembly: [number, number][];
    created_sample: WallDict | null;
  };
  assigned_wall: WallDict | null;
  last_gadgets: GadgetReportView | null;
  simulation_pending: boolean;
  day_night_cycles_run: number;
  event_seq: number;
}

export type GameAction =
  | { type: "CollectHint"; hint_id: string }
  | { type: "ProjectHint"; hint_id: string }
  | { type: "PlayCassette" }
  | { type: "SetDeskDial"; dial: string; value: string | number | boolean }
  | { type: "SpawnLayer"; material: string; thickness: number }
  | { type: "PlaceLayer"; bench_index: number; position: number }
  | { type: "RemoveLayer"; position: number }
  | { type: "CreateWallSample" }
  | { type: "AssignWallSample" }
  | { type: "ReadGadgets" }
  | { type: "TryDoor" };

export interface ActionResponse {
  events: GameEvent[];
  data: Record<string, unknown> | null;
  job_id?: string;
}

export interface MaterialInfo {
  id: string;
  name: string;
  category: string;
  conductivity: number;
  vapor_resistance: number;
  unit_cost: number;
  min_thickness: number;
  max_thickness: number;
  structural_system?: string;
}

export interface ContentPackData {
  version: string;
  materials: MaterialInfo[];
  u_value_range: [number, number];
  rating_bands: [string, number | null][];
  canonical_orders: Record<string, string[]>;
  climate: {
    orientation_factors: Record<string, number>;
    locations: Record<string, unknown>;
  };
}
