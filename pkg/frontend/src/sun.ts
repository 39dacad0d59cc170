// Small display-only sun position for the desk indicator: mid-latitude
// solar altitude/azimuth from the month and hour dials. The annual energy
// figure never depends on these dials; this is the desk's visual aid.

const LATITUDE_DEG = 47; // the sample office's mid-European latitude
const DEG = Math.PI / 180;

export interface SunPosition {
  altitudeDeg: number;
  azimuthDeg: number; // 0 = north, 180 = south
  daylight: boolean;
}

export function sunPosition(month: number, hour: number): SunPosition {
  // declination peaks in month 6, troughs in month 12
  const declination = 23.44 * Math.sin(((month - 3) / 12) * 2 * Math.PI);
  const hourAngle = (hour - 12) * 15;
  const sinAlt =
    Math.sin(LATITUDE_DEG * DEG) * Math.sin(declination * DEG) +
    Math.cos(LATITUDE_DEG * DEG) * Math.cos(declination * DEG) * Math.cos(hourAngle * DEG);
  const altitude = Math.asin(Math.max(-1, Math.min(1, sinAlt))) / DEG;
  return {
    altitudeDeg: altitude,
    azimuthDeg: ((180 + hourAngle) + 360) % 360,
    daylight: altitude > 0,
  };
}
