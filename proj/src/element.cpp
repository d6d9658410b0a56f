//
// Project chemid - Copyright 2026 chemid authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "chemid/element.h"

#include <array>
#include <string_view>

namespace chemid {
namespace {

struct ElementData {
  std::string_view symbol;
  double weight;
};

// Index is the atomic number; slot 0 is a placeholder.
constexpr std::array<ElementData, kMaxAtomicNumber + 1> kElements = { {
    { "", 0.0 },         { "H", 1.008 },      { "He", 4.0026 },
    { "Li", 6.94 },      { "Be", 9.0122 },    { "B", 10.81 },
    { "C", 12.011 },     { "N", 14.007 },     { "O", 15.999 },
    { "F", 18.998 },     { "Ne", 20.180 },    { "Na", 22.990 },
    { "Mg", 24.305 },    { "Al", 26.982 },    { "Si", 28.085 },
    { "P", 30.974 },     { "S", 32.06 },      { "Cl", 35.45 },
    { "Ar", 39.948 },    { "K", 39.098 },     { "Ca", 40.078 },
    { "Sc", 44.956 },    { "Ti", 47.867 },    { "V", 50.942 },
    { "Cr", 51.996 },    { "Mn", 54.938 },    { "Fe", 55.845 },
    { "Co", 58.933 },    { "Ni", 58.693 },    { "Cu", 63.546 },
    { "Zn", 65.38 },     { "Ga", 69.723 },    { "Ge", 72.630 },
    { "As", 74.922 },    { "Se", 78.971 },    { "Br", 79.904 },
    { "Kr", 83.798 },    { "Rb", 85.468 },    { "Sr", 87.62 },
    { "Y", 88.906 },     { "Zr", 91.224 },    { "Nb", 92.906 },
    { "Mo", 95.95 },     { "Tc", 97.0 },      { "Ru", 101.07 },
    { "Rh", 102.91 },    { "Pd", 106.42 },    { "Ag", 107.87 },
    { "Cd", 112.41 },    { "In", 114.82 },    { "Sn", 118.71 },
    { "Sb", 121.76 },    { "Te", 127.60 },    { "I", 126.90 },
    { "Xe", 131.29 },    { "Cs", 132.91 },    { "Ba", 137.33 },
    { "La", 138.91 },    { "Ce", 140.12 },    { "Pr", 140.91 },
    { "Nd", 144.24 },    { "Pm", 145.0 },     { "Sm", 150.36 },
    { "Eu", 151.96 },    { "Gd", 157.25 },    { "Tb", 158.93 },
    { "Dy", 162.50 },    { "Ho", 164.93 },    { "Er", 167.26 },
    { "Tm", 168.93 },    { "Yb", 173.05 },    { "Lu", 174.97 },
    { "Hf", 178.49 },    { "Ta", 180.95 },    { "W", 183.84 },
    { "Re", 186.21 },    { "Os", 190.23 },    { "Ir", 192.22 },
    { "Pt", 195.08 },    { "Au", 196.97 },    { "Hg", 200.59 },
    { "Tl", 204.38 },    { "Pb", 207.2 },     { "Bi", 208.98 },
    { "Po", 209.0 },     { "At", 210.0 },     { "Rn", 222.0 },
    { "Fr", 223.0 },     { "Ra", 226.0 },     { "Ac", 227.0 },
    { "Th", 232.04 },    { "Pa", 231.04 },    { "U", 238.03 },
    { "Np", 237.0 },     { "Pu", 244.0 },     { "Am", 243.0 },
    { "Cm", 247.0 },     { "Bk", 247.0 },     { "Cf", 251.0 },
    { "Es", 252.0 },     { "Fm", 257.0 },     { "Md", 258.0 },
    { "No", 259.0 },     { "Lr", 266.0 },     { "Rf", 267.0 },
    { "Db", 268.0 },     { "Sg", 269.0 },     { "Bh", 270.0 },
    { "Hs", 277.0 },     { "Mt", 278.0 },     { "Ds", 281.0 },
    { "Rg", 282.0 },     { "Cn", 285.0 },     { "Nh", 286.0 },
    { "Fl", 289.0 },     { "Mc", 290.0 },     { "Lv", 293.0 },
    { "Ts", 294.0 },     { "Og", 294.0 },
} };

constexpr std::array<int, 23> kNonmetals = { 1,  2,  5,  6,  7,  8,  9,  10,
                                             14, 15, 16, 17, 18, 32, 33, 34,
                                             35, 36, 52, 53, 54, 85, 86 };

constexpr int kB3[] = { 3 };
constexpr int kC4[] = { 4 };
constexpr int kN3[] = { 3 };
constexpr int kN35[] = { 3, 5 };
constexpr int kO2[] = { 2 };
constexpr int kHal1[] = { 1 };
constexpr int kHal1357[] = { 1, 3, 5, 7 };
constexpr int kP35[] = { 3, 5 };
constexpr int kS246[] = { 2, 4, 6 };
constexpr int kH1[] = { 1 };
constexpr int kZero[] = { 0 };

}  // namespace

int atomic_number(std::string_view symbol) {
  for (int z = 1; z <= kMaxAtomicNumber; ++z) {
    if (kElements[z].symbol == symbol) {
      return z;
    }
  }
  return 0;
}

std::string_view element_symbol(int z) {
  if (z < 1 || z > kMaxAtomicNumber) {
    return "";
  }
  return kElements[z].symbol;
}

double atomic_weight(int z) {
  if (z < 1 || z > kMaxAtomicNumber) {
    return 0.0;
  }
  return kElements[z].weight;
}

bool is_nonmetal(int z) {
  for (int nm: kNonmetals) {
    if (nm == z) {
      return true;
    }
  }
  return false;
}

std::span<const int> smiles_default_valences(int z) {
  switch (z) {
  case 5:
    return kB3;
  case 6:
    return kC4;
  case 7:
  case 15:
    return kN35;
  case 8:
    return kO2;
  case 16:
    return kS246;
  case 9:
  case 17:
  case 35:
  case 53:
    return kHal1;
  default:
    return {};
  }
}

std::span<const int> standard_valences(int z) {
  switch (z) {
  case 5:
    return kB3;
  case 6:
  case 14:
  case 32:
    return kC4;
  case 7:
    return kN3;
  case 8:
    return kO2;
  case 9:
    return kHal1;
  case 15:
  case 33:
    return kP35;
  case 16:
  case 34:
  case 52:
    return kS246;
  case 17:
  case 35:
  case 53:
  case 85:
    return kHal1357;
  default:
    return {};
  }
}

std::span<const int> isoelectronic_valences(int z, int charge) {
  const int iso = z - charge;
  switch (iso) {
  case 1:
    return kH1;
  case 2:
  case 10:
  case 18:
  case 36:
  case 54:
  case 86:
    return kZero;
  case 5:
  case 13:
    return kB3;
  case 6:
  case 14:
  case 32:
    return kC4;
  case 7:
  case 15:
  case 33:
  case 51:
    return kN35;
  case 8:
  case 16:
  case 34:
  case 52:
    return iso == 8 ? std::span<const int>(kO2) : std::span<const int>(kS246);
  case 9:
  case 17:
  case 35:
  case 53:
  case 85:
    return iso == 9 ? std::span<const int>(kHal1)
                    : std::span<const int>(kHal1357);
  default:
    return {};
  }
}

}  // namespace chemid
