#pragma once
// Physical constants and unit conversions. All internal computation is in
// Hartree atomic units (hbar = m_e = e = 1); conversions happen at I/O only.

namespace chirascat::units {

// Boltzmann constant [Eh / K]
inline constexpr double k_B = 3.1668115634556076e-6;

// Unified atomic mass unit [m_e]
inline constexpr double amu = 1822.888486209;

// 1 angstrom [bohr]
inline constexpr double angstrom = 1.8897261254578281;

// Atomic unit of pressure Eh/a0^3 [Pa]
inline constexpr double pressure_au_Pa = 2.9421015697e13;
inline constexpr double mbar_Pa = 100.0;   // 1 mbar = 100 Pa
inline constexpr double pressure_au_mbar = pressure_au_Pa / mbar_Pa;

// Atomic unit of time [s]
inline constexpr double time_au_s = 2.4188843265857e-17;

// Angular frequency: 1 Hz of ordinary frequency = 2*pi rad/s
inline constexpr double two_pi = 6.283185307179586476925286766559;

// Convert ordinary frequency [Hz] to angular frequency in a.u.
inline constexpr double hz_to_au(double f_hz) { return f_hz * two_pi * time_au_s; }

// Convert an angular frequency in a.u. to an ordinary rate in 1/s.
inline constexpr double rate_au_to_si(double w_au) { return w_au / time_au_s; }

// Energy conversions
inline constexpr double kelvin_to_au(double t) { return t * k_B; }
inline constexpr double au_to_kelvin(double e) { return e / k_B; }

}  // namespace chirascat::units
