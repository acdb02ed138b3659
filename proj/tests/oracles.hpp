#pragma once

// Reference values computed offline in 30-90 digit arithmetic (mpmath) by
// routes that share no code with the library:
//   heat trace      direct summation to convergence
//   sphere finite part   -2 Re psi(1/2 + i sqrt(m^2 - 1/4))
//   sphere zeta'(0)      Hurwitz-zeta binomial expansion, differentiated in s
//   torus finite part    (A / 2pi) sum_{n != 0} K_0(m |n|) - (A / 4pi) ln m^2
//   torus det'           Gamma(1/4)^4 / (16 pi^3)   (square torus, Kronecker limit formula)
//   sphere det'          exp(1/2 - 4 zeta'(-1))
namespace oracle {

inline constexpr double kSphereHeatT1 = 1.41844263863105511321;
inline constexpr double kSphereDirichletM1S1 = 1.53568228526459980842;
inline constexpr double kSphereFinitePartM1 = 0.42985311745939294814;
inline constexpr double kSphereFinitePartM2 = -0.50514082704430109900;
inline constexpr double kSphereFinitePartM4 = -1.29827835646602994943;
inline constexpr double kSphereZetaPrimeM1 = -0.91626661866945315010;
inline constexpr double kSphereZetaPrimeM2 = -0.80708679036092945201;
inline constexpr double kSphereZetaPrimeHalf = -0.43508398138329303997;
inline constexpr double kSphereDetPrime = 3.19531148605918608395;
inline constexpr double kSquareTorusDetPrime = 0.34830098242141921480;
inline constexpr double kSquareTorusFinitePartM1 = 0.76917818494378870164;
inline constexpr double kSquareTorusFinitePartM2 = 0.26552667219495458970;
inline constexpr double kOblongTorusFinitePartM1 = 0.68635236883560688810;
// Mean of C_f through the heat integral, I / A + gamma_0(m0), torus 1x1, m0 = 1.
inline constexpr double kSquareTorusHeatCfM1 = 0.64040931109029109862;
inline constexpr double kSquareTorusImageCfM1 = 0.78762925872096050796;
inline constexpr double kOblongTorusImageCfM1 = 0.36162725819497525037;
// (2 gamma - 3 ln 2) / 2pi: heat-route minus image-route C_f for every torus and mass.
inline constexpr double kCfRouteOffset = -0.14721994763066940934;
inline constexpr double kFreeSpaceCf = 0.01845107377717180632;  // (ln 2 - gamma) / 2pi

}  // namespace oracle
