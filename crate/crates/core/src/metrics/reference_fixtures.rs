// Reference values for the statistical tests, precomputed with an
// independent implementation and frozen. Each tuple pairs raw samples
// with the expected statistic and p-value.

/// (sample, W, p)
pub const SHAPIRO_WILK_CASES: &[(&[f64], f64, f64)] = &[
    (&[-0.7092724886229547, 0.03298748860936035, 1.1712195245660006], 0.9854355837553103, 0.7689490269305723),
    (&[5.918601061501978, 3.6444363349850324, 1.3794388248595708, 3.2258937743759004, 3.143461640475264], 0.9321628345659919, 0.611192152593171),
    (&[0.4794927796581707, 1.1339951304362472, 1.1435415105805284, 2.361466691630269, 0.48130044635057706, 0.6822929432797334, 1.1349292207015065, 1.5300669937276774], 0.8846675866855651, 0.208581399327815),
    (&[-0.574228187958991, -0.7869382282002191, -0.3475428003769474, -0.3519380920266648, -0.6909981111053161, -0.08466152188353449, -0.527908719510674, -0.6680564072148203, 0.7122946713544545, -0.5518326205596953, -0.019507720249333005, 0.7205652822172004], 0.8251156997536286, 0.018343065323594924),
    (&[-0.7235232315227793, -0.7609964706997772, -0.9150465558209282, 2.454737893127129, 1.9981490367561958, 0.13047372305661026, -1.086955258215981, -0.7819507347593444, 1.3674889320726404, 1.8303275330314366, 0.1789445267432971, -1.025475291094031, 0.15307798893133961, 1.1462827878697985, -0.7519359000584231, 0.20873953540825452, 0.18334402287607593, -1.2480242693527537, 1.9924230510476082, 0.03000480162041345], 0.8926778553086875, 0.030128982102036166),
    (&[4.429016630758129, 3.1840469918260776, 0.17474680801854475, 0.01054034600597523, 0.36870976905515185, 1.3797784362302892, 1.951106509713356, 1.7318282376570506, 0.7405716857279673, 0.5036938549340958, 0.09190251737620574, 1.9104656497639056, 0.11579923205897409, 1.8778057492372024, 1.3447405551001002, 0.3657973708574815, 2.212024939932789, 1.6386627236990083, 3.9799785372299037, 0.25647632892341776, 0.9035480603002042, 4.613844679164954, 3.9194713661497964, 0.6426049564790176, 2.8571015508837703, 0.7344752818621885, 0.3323354614503505, 2.974577489835211, 2.6207937426028667, 1.7590211954626267], 0.9085474256551769, 0.013679184346122858),
    (&[1.2933563675490798, -0.8031722731342883, -0.1636604384876192, 1.5511517609279628, -0.14268513965929172, -0.051921514320802345, -1.754616562002245, 0.15332204808151909, -0.45693217369959466, 0.5554464944734497, -0.6605139773491878, -0.6088061619923033, 0.37391535935141973, 0.7728878734734027, 1.4591628804232044, -0.3735057251604573, 0.07999256526966836, -2.224992684832802, 0.4164778898545098, 0.5675813888620207, -2.999399447572179, 1.3364693336503597, 0.9412898726012651, -1.1122439181462245, -0.11630292107090179, 6.500506914697448, 3.5096968724101263, 5.3712518453986995, 6.258375908732772, 5.843499532827406, 3.9370404665342473, 4.606874388862408, 5.4684396356768845, 6.135250417912069, 5.6227701138886985, 3.8778690832820284, 5.193218021673479, 5.958519422093698, 6.087857339165465, 7.467107131382761, 7.695785526739339, 6.600444871251178, 5.832463364298748, 7.9728511341059445, 6.617423136852874, 6.284793973236831, 4.40926678725935, 5.257633412108976, 6.781546966827188, 6.870066257901145], 0.9054469993723869, 0.000730640944626092),
    (&[-2.682437015611113, -2.929293272733676, -3.243221415439806, -2.972974621976953, -3.0142433834210465, -3.2834591508116717, -3.201269193346612, -3.0296750356806, -3.8536517385017945, -3.075838203625105, -3.076256969812502, -2.252639553307846, -3.5180252284536673, -2.723111334540185, -3.272464687347903, -2.4641314214213423, -3.4894005182349574, -2.757246445783646, -2.3204132558589134, -3.7887130023792692, -2.71985817437976, -2.8078131492602503, -3.109710906254309, -3.2013327389699158, -2.9091723291458402, -2.4942301422263333, -2.9496211594838972, -2.889821094599838, -3.706449766610809, -2.650725575286735, -3.5775241921920684, -3.1108541132194425, -2.983536090654179, -3.2345045427382995, -3.653727259711629, -2.0816893789088295, -3.159108414396161, -4.233570219464416, -2.45665373339389, -2.814962357623171, -2.8326565341787155, -3.1886353116377375, -3.52856332939034, -3.758839678740197, -3.673893085491917, -2.452433649364917, -2.2610706584659406, -3.4303057291809727, -2.8664066848585255, -3.210926712153465, -3.9420995043699767, -3.6091565160690267, -3.6068559091243646, -3.2410745623667765, -2.646094237109932, -3.8329447352400363, -3.149934642551581, -3.7541259925050947, -2.220678723601597, -3.134850380722494, -3.0939040228987795, -2.8669000410977277, -2.555284072154977, -3.468286984156264, -2.4735065472322857, -2.5183534526556035, -3.2349015151623917, -2.522035754992003, -2.9443136681562416, -2.27055480538849, -3.1415868936095706, -3.058632346203704, -3.0387327149200383, -2.69185248038165, -1.9872236867722413, -2.9925472982529704, -2.8862652076006183, -2.7179017857042327, -3.2739848273274608, -2.7180658542594975, -2.8745456192165086, -2.8048786269221986, -3.0927039285676794, -2.742830536757868, -3.1315880982740736, -2.4339272480267824, -2.3593472489354363, -3.2954447006500662, -2.283155534428174, -2.4027089257726657, -3.1740322674581143, -3.5393094535258323, -3.14250028817039, -3.4335167986182586, -3.341232539587156, -3.380227993050973, -2.35123234264026, -1.8259689170707034, -2.86438589861969, -2.5575778690845725], 0.994793631770642, 0.9694636134738592),
    (&[0.5349532573644711, 6.720035180380836, 8.541273004168051, 9.914909855740044, 0.8048102966106996, 1.6543917677586206, 8.751269686788733, 5.426089689494349, 9.813060476513579, 6.552218992584811, 1.646109343222486], 0.8717068979906023, 0.08153483243727336),
    (&[-0.9740030454312529, -0.4864704134697937, -1.3465337491284173, 1.5702684870812134, 1.1796390004785917, 0.8809991742226543, -2.03623094731001, -2.105823214991565, 2.370490147965022, -1.226570724461566, 0.5856002669022553, -2.053615520881401, 0.4057193114359525, 0.3666744295594822, 0.4855772006350206, 0.3734685899728912, 0.5375730082656935, -2.424162024380042, 6.259005680084214, 0.29895403904623763, -0.46947840163481497, 1.8501772799384224, -1.957104622388293, -0.5503247839249097, 0.8034716401583571, 1.8083533939016896, 0.4441701947092711, 1.696313675322929, -0.6622900648130506, 2.3807423090003867, -1.5210231797145266, -0.5718757315425058, -0.14149248252411983, -0.8740172904036985, 0.5894607076354677, 2.071477914539876, -0.08618277273291304, 0.5170133166978207, -1.5378535312618413, -0.5554210274569954, 1.5699677928191347, -1.9194024075545908, -0.43965178093339574, -0.10705413357574058, 0.2510588902694481, -0.8034881995115473, 4.0890913814942, -0.8270588853033894, 0.2525654158107642, -1.7198364855597204, -0.6135149390127206, -1.431080037232091, -1.3482243675044405, -0.2830137074788307, -1.000354845366111, -2.594361896329721, -0.8108985943647294, 0.04430657579997592, -0.7647260719432699, 1.0331716766726966], 0.9234154709930831, 0.0010554568311769137),
];

/// (sample_a, sample_b, W, p) with group-mean centering
pub const LEVENE_CASES: &[(&[f64], &[f64], f64, f64)] = &[
    (&[0.1996222805956524, 0.6697219989769059, -0.2646740644379965, -2.1866386484910993, 0.7222570447747748, -0.31734814127005884, 0.19015746300352085, -0.4004178687992884, -1.051616130190847, -1.1575825829385582], &[1.2598703484926155, 0.6437980945031611, -0.003152816284298081, 0.7725060592886994, -1.0041657537857596, -0.9111052756751483, -0.5619753737636359, 0.1852435588966151, 1.9867307260885243, -0.021180060969957934, -0.7473065683351608, -0.8445862671633141], 0.13053538015194566, 0.721666176386851),
    (&[-0.36315539453417, 1.4086417755456564, 0.7789702765254122, 0.6816490278300887, 1.0777163385887767, -0.5302877125259053, -0.18469764519087534, 0.5787961001545833, 0.45693031676023804, 0.6174914115611214, -0.24567564321966612, 0.5627393250219151, 0.028953488568894795, -0.1167099681219925, -1.8970639998496328, -1.3242150315476748, 1.0638643166569266, -2.2334138828781116, -1.2840526091813196, -0.0725969343467524, 0.28963032819861134, 0.4068294332341095, -0.1368573589294179, -1.0088794935942933, -0.9847042445692405, -1.2443461262109992, 1.5776692328023165, -1.1563585437812007, 0.9790100870409753, -1.0289347598428473], &[-0.39036832387040443, 2.436656744043678, 2.5645672682936196, 2.3415758379886453, 0.7999290838379548, 0.3666580951960149, 0.7163215862771071, -2.23503105953641, 5.755235133817111, 2.8785078645182196, -1.4252908799880961, 2.195761669013971, 1.3277701239995339, -2.7275466907820425, -8.1855950512155, -0.7285392316342831, -1.654812674083049, 2.3006353197040004, -0.9113127668579009, 0.19205830031072585, 6.259520894615667, -1.2038654497728292, 2.6142161376917925, -1.3033284836372232, 1.7375368844432115, 3.9633148545355246, -3.7100577751624852, 0.5792147079708324, -3.130030094573349, 3.5471545018245383], 16.975499454485554, 0.00012180021819069975),
    (&[0.9650594263564785, 0.5152011367447565, 0.12825252493031497, 0.6772052163640353, 3.574641660610596, 0.4580637107674258, 0.3308298726748759, 0.08039412416038542, 0.30232172621569287, 4.139966156120271, 0.24570174331160574, 2.80014521901171, 0.13521539578661482, 0.14553769371601993, 2.1956350186994835], &[4.138126310623384, 2.451151238329205, 3.438757990894899, 1.2248359978652559, 4.402967658616942, 2.9235310762704985, 7.245714566522486, 1.825622205724387, 4.802430870902792, 1.3591672420132073, 5.926763495451802, 3.060382534301389, 6.22243587940379, 0.8532851384401229, 4.78054408863754, 3.5145364509240897, 3.9434140784873812, 0.005879622955696399, 3.770608656409159, 8.540426462758306], 2.016430291054024, 0.16498357349189435),
    (&[0.5772265707972281, 0.6934516451383888, 0.5566675694686115, 0.835782805644648, 0.9197462263260862, 0.8125913252371163, 0.11456480514678302, 0.008672585507043307, 0.045217178636568156, 0.41385181561954043, 0.32668295096498357, 0.2822225863459945, 0.6890388038757191, 0.31618073153236026, 0.4600402124878976, 0.3871273196196433, 0.42585852827998893, 0.020428490015677814, 0.5713212585013562, 0.8898684589593955, 0.7436825749560394, 0.019264553101721926, 0.7439717098720992, 0.05207523381540469, 0.5043980126009019, 0.6197471726873304, 0.016762920656391844, 0.5618914296845825, 0.7256957118363438, 0.6294560400246841, 0.6699070887541104, 0.6947885959296695, 0.7201673053991423, 0.8784022708877939, 0.4086007893441497, 0.027304976097512368, 0.21936054258087212, 0.40056186790256243, 0.555457364827041, 0.18331674089024097, 0.6649204245595288, 0.74488055607153, 0.9552619094026045, 0.7796231001459493, 0.19903266154145383, 0.6155349471273325, 0.40249539425162006, 0.6812048587486482, 0.37668297747426527, 0.7078242212118938], &[0.9131951519457004, 0.7245413314898871, 0.1258883740151704, 0.016519103777975053, 0.8808423117853588, 0.39691508478832604, 0.46858565741599156, 0.824331475812762, 0.7911265771052469, 0.927667310158949, 0.2384635802875399, 0.16087934834713025, 0.39523307424465026, 0.22437777944780324, 0.6554366833514379, 0.43290059361990185, 0.450478605032985, 0.5472824763616043, 0.32605239783308104, 0.15971550454943473, 0.7417632365117579, 0.621879767366621, 0.12601613973940662, 0.744510377318313, 0.666023338906762, 0.5656791509005281, 0.09405380600256708, 0.4699514927568026, 0.11412240711975596, 0.039318407765576935, 0.7065433488419419, 0.4511332422441787, 0.12996361090184982, 0.3797810346315692, 0.13115310928514679, 0.6879788685683124, 0.20947108365849676, 0.21116335578450718, 0.4254094646992119, 0.6768067653984415], 0.01461598741409898, 0.904048554514483),
    (&[2.09834018539692, 1.9398346720157469, 2.0342594356331216, 2.049887197186085, 2.0518120967012705, 2.0069844177813088, 2.089248380794914, 1.979179108622259], &[3.6119311930020617, -1.593517724115944, 2.3377894506168, 1.9512429465718766, 0.068363672814717, -0.5687980393722087, 0.11497914486534966, 0.1273259047677946, -1.9006748887204346], 15.633588295141722, 0.0012732759530430125),
    (&[1.260475176865556, 0.8737393582145381, -0.3101354554142567, 0.635306690239607, 0.7209815965134027, -0.07153988346635734, -1.468568054134378, -1.489594712012502, 0.16572681871443368, 1.5900187664228442, 1.101655295634151, -0.3933544803898317, 0.061720846107060065, 0.5198763321063006, 2.693447669179937, 1.0939244327374023, -0.2619719445872005, 0.024644263538113654, -1.6466096996546262, -2.1020421429074267, -4.465106910351326, 0.35075392090053675, -0.4584835999101786, 0.8563551293058416, -0.12578609686520703], &[-0.05008539290200727, 0.7731403104273641, -1.7793409705963226, 0.8285289490043185, -0.7461409001877388, -0.08823720416577066, -1.2175237080502954, -0.7932214080186741, -0.13578879592726037, -0.22623425610485348, 1.0886505511413733, -1.2209852910496604, 0.2702814470701238, -0.9621761087292094, -1.483544099087628, -2.526521809357671, 1.7194077448179088, -0.6383142552301546, 2.1267149283305717, -1.8546445460378127, 0.5920865355373294, -1.19058096066976, -0.7301246425847188, -0.3786656993851776, -1.1854731023878649], 0.15847566837126437, 0.6923289673795636),
    (&[-0.8349117851847105, 0.38302304553531363, -1.0430125029565593, 0.25021573951426723, 2.1372706630057263, 0.9509936443926835, -0.4370977162421778, -0.09645278510068848, 0.9891702389342287, -0.9849948380942846, -0.5128800950788267, -0.33444986342069094, 0.7061622638928644, 0.5957277427081825, 0.2428920085376803, 0.8338782949137608, -1.684552739587531, 1.1022190592748375, 0.45474299291856196, -0.7274361090349929, 0.4519725478931196, 3.1091924283296617, -1.3354301153459014, -0.5951808345998927, 1.6436218030083687, 0.04888182546909659, 0.07305112517338933, 1.2273388943525247, -0.3709355492232022, -1.9562720243375458, 2.490560882390111, 0.38887936588789357, 0.3377301814125811, 0.2601834337414079, -0.4901733896991674, 1.86205112524465, 0.5700583253157648, 0.9264228636717589, 0.8243423905835233, -1.1106114686757054, -0.07926462583691422, 0.15659994131125154, 0.45590479740967654, 0.49364250429450185, -2.3138688717577613, -2.1559444482643504, 0.8846130280999166, -1.3937863068959524, 0.1973743574854547, -0.5777180232501526, 0.1456856158428046, 0.4264036036474795, -0.3825821900253692, -0.581353223181586, 0.3825085658418927, 0.3441293063708471, -0.7835188821978941, 1.0076145447373979, -0.33192762858170427, -1.6803160096878138, 0.07919630696990126, -0.368129621484433, 2.6039784538403206, -0.11320548949494033, 0.5161449266183427, 0.5596960942932214, 0.2220597407081676, -0.5440519668933981, 0.36949168352855866, 0.32195408446696633, -2.022957635751768, 0.15612285308896318, 1.6345030040221855, 0.5054465475104832, 0.19178359728134442, 2.447792261372363, 0.08496178978049589, 1.4738387373995174, 1.2066028684416272, 0.9353321808269012, 0.023334755311436788, 1.398328926524867, -0.4134059340662812, 0.35034185419172387, -0.3714625909060244, -0.7654535506654816, 0.37795013472843036, -0.2761728307301987, -1.9286689403273016, 0.0798883058068299, -0.1223031517860792, -0.05882293636396728, 1.473537253715136, 1.5003117408523998, 0.10261194811541278, 1.4879208034549392, 0.5285435463206001, 1.6018025814985812, -2.2971061683474434, 0.0690416788642799], &[-1.8900780436589697, -1.9881841076517537, -1.244180692763866, -0.9062631251396425, -1.1976346280095345, 0.18270237927708685, -1.3779690356140257, -1.861923954070079, 1.756464878263069, -3.9829911521286387, -1.5873467110018462, -0.10556303481081113, -1.021840614732636, -1.4482362939657953, -1.8124115399267136, -1.7992056383943111, 0.303042221945908, -0.6948882348927327, 0.3473347803955864, 0.5977428251805694, -0.9338834606640543, -1.841730207055352, 3.096945471200817, -1.663293898940252, -0.6049719894172623, -1.6062879792013276, -0.5443660538972688, 0.13008158237093254, 1.978550872558365, 0.058685185131856096, 0.044603043340898305, -0.1598122009292755, -0.03451378882611343, -0.3104862988072969, -0.20207757505655305, -1.0360889015256793, 0.6173234331069755, -1.2198912881052313, -1.4451933979497797, 1.132504820665165, 1.8243496813560487, 0.7704049490888629, 3.038908210125089, -1.8143159995767935, -2.5494090246691132, -1.079211370904114, 1.7284499199760803, -0.4347696835744789, 0.2829498940047426, 0.27466046351897777, 0.22662260376528962, 3.3969231901757606, 1.7010378878157888, 1.736525915593249, 0.22299018974780743, 1.4858317929600362, -1.8594787536464699, 1.2115859219738805, 0.42065976750203066, -1.21812668766136, 2.501620036043118, -0.2381267833139217, -0.5234426099551479, -0.9107865624600645, 0.31609160308686823, 0.1872654723707151, 1.4130041431593532, -0.14048659087432042, -0.575959087150366, 0.8214503773480976, -2.1913671957296317, -0.7218197956994443, -1.9247118521607738, 1.4490827227957968, 0.553618144371097, 1.7077225811865393, 3.1535540867682212, 0.8152447576677999, -0.1685563481673138, 0.0810195901867613, 0.10927809399033794, -1.3885040665589705, -1.8689980778710829, 0.4722717308830816, 0.7654298534450745, -0.297023914980205, -2.5425828541955315, 0.23737725696310635, -0.29727698348002, 0.2911517805831282, 0.17889255547182276, -0.36543518410851816, 0.41039776708743614, -1.568331865430259, 1.1011434397524038, -1.0922181235616875, -1.5173761436037507, 0.6672665490770233, 2.0547407028273947, 0.8444351637781282], 7.907656324754224, 0.005418035684511256),
    (&[0.5983977906531446, 0.4379605919172507, -0.041797885707545834, -0.3276087419435312, 1.5442454648253223, 1.246394435398472, -0.4919863834159526, 0.05185253342426677, -0.6656567024645823, -1.3687330799250854, -1.3921750837082691, 0.7517346569658265], &[-0.0881391785091543, 0.06030496539533156, 0.11653284687603882, 0.13714029622711407, -0.0805655035168892, 0.26024087702503634, 0.07544668491350942, 0.0780749673952944, -0.04066693284782948, -0.015247019714872665, 0.21101082277021638, -0.134728831041873], 17.78388648963467, 0.0003550580273042797),
    (&[0.6555465576610245, 0.44546756546503846, 0.12134075804255279, 0.32615996426560173, 0.19097395436281928, 0.16494188471957352, 1.4950701836620568, 0.36547955869163545, 0.7999062381289563, 0.09441435670407256, 0.35111258854460115, 0.41853559566785214, 0.30731973452201805, 0.039746749367727215, 0.004852911766738286, 1.148945207384805, 0.26806698092935444, 0.08450120933899052, 0.640892262181806, 0.3121654823320834, 0.5440705423334303, 0.23620155896367395, 1.0564587946193287, 1.930121134581798, 0.6729965945814579, 0.8405889940164972, 0.12609923959522, 1.1290721076037855, 2.39240193394679, 0.051293871084915545, 0.8805660278647138, 0.8706263211924856, 0.3163917420892921, 0.1463890366409518, 2.2569871021675274, 0.8534223894252785, 0.2401581977277381, 0.25441886145961057, 0.3168850790845328, 0.6513201280786503], &[1.1730883532650904, 0.5385048379767983, 1.1306897254794048, 0.6986189241984038, 1.6154604340755259, 2.487867773323896, 3.2995271194800213, 2.8173562137278902, 2.330989114772835, 2.2711871501535206, 1.8245385351719356, 0.6409331012676729, 2.2458794009280094, 1.6633299361047662, 1.7575218415418288, 1.2343114758974596, 2.7063940574035286, 1.0329314464777957, 3.230098506143551, 0.612574986566949, 0.3109829506048847, 2.057187980972389, 3.1067070497127873, 1.1159777988540496, 1.2748973882879282, 3.857654246262436, 2.228495176462264, 0.8983245780181655, 3.5561045848603414, 0.1251931699614257, 2.0829976707601454, 3.95764654467976, 1.2208498014509725, 2.035032558022138, 3.3610520463759346], 16.074204049438265, 0.00014544776599941152),
    (&[8.824094018823175, 13.802991119635458, 3.814990965856131, 1.4091364534933053, 3.4438831442225206, 5.643124363356018, 4.948978965638318, 9.302510505688115, 3.862502602921901, 11.056346989054218, 5.98304900443589, 3.0910149375121225, 14.205170834346465, 6.3975667990766585, 4.046558558914342, 12.195097208378005, 4.446771976075854, 9.677215032899213, 11.364153315925403, 19.29298752934875, 11.192827320366352, 5.707798446475504, 17.435181400607156, 9.349165984292886, 11.45182956969063, 6.849979138988369, 10.395867355012742, 13.222375242602993, 16.64756874080143, 4.470565385223534, 14.826654028805386, 7.879267270624084, 5.454660962471841, 7.76819520662435, 15.634801370563807, 13.007826896822472, 1.2706231067643188, 10.819708520621951, 14.304893631997562, 7.431075310327895, 0.12444778296546666, 10.693965607674098, 5.668168398458952, 17.662761213441527, 16.377076767334444, 3.5630387819104667, 11.43511629367547, 17.487714768905796, 8.381462255945216, 4.724103526985413, 2.6653086167411777, 8.870922650055755, 2.4444550822772335, 17.748129548335605, 17.900635163981306, 8.79609578653863, 5.8797754319365865, 9.651699941982535, 1.538843460011405, 20.878917271951252], &[11.574151799730656, 2.465300646046641, 6.52005361307288, 14.704067969707436, 6.519600880320006, 17.68123278423489, 4.242477737175703, 13.37419015132755, 14.941843743981082, 11.86419098566473, 15.088598472828028, 13.123688773816623, 13.380615711112833, 13.833500066501397, -0.896354336094138, 11.284942189883653, 9.017481968628665, 10.072997936500856, -0.7958116554361396, 13.07317584017136, 19.107724424180745, 7.044417575244179, 16.569600638378823, 6.820824642739604, 16.781798518610664, 4.048163060937457, 5.1623822456051025, 17.164160058586337, 3.6507146081857433, 3.212154484073717, 6.420454883669394, 3.6130598550200794, 11.068956965992555, 7.890113196480524, 7.619719223735657, 9.233629588027295, 11.921402044926031, 10.722057250600885, 6.549239599234495, 10.63601814177174, 14.953481457652078, 8.905945698202904, 5.949568223954442, 12.432154060013106, 12.90554844268368, 13.173199134151867, 14.244220953185923, 9.428281831706338, 17.36812086576596, 14.56772476839366, 9.669510698923444, 10.736930068272, 9.763172027830592, 10.96186221587293, 4.619948864186229], 0.9673640763540371, 0.3274396560259777),
];

/// (sample_a, sample_b, tail "less"/"greater", U, p)
pub const MANN_WHITNEY_CASES: &[(&[f64], &[f64], &str, f64, f64)] = &[
    (&[1.0, 2.0], &[3.0, 4.0], "less", 0.0, 0.16666666666666666),
    (&[1.0, 2.0], &[3.0, 4.0], "greater", 0.0, 1.0),
    (&[1.601465844473108, 1.3847743856231085, 0.22985996396015104, 0.19909002400439532, -0.6033969886431523, -1.3392102657547316, 0.19622814017055423, -1.7384743244128753], &[-0.8851768076536155, -0.6761784038635328, -0.2591547812184112, 0.026624350214117798, 1.9824262152890721, 1.6568941228164875, 1.925202124054435, 1.478269034560711, 0.8101696236649285], "less", 25.0, 0.16063348416289594),
    (&[0.6354690934442813, 1.1322114910317116, 0.4428812029373936, 0.20096056091796888, -0.3958653247392288, -0.7693420454993076], &[-1.4688421519342865, 0.4988643496591854, -0.37658306948162823, -0.10044310154115672, -0.5691372901994115, 1.4695204519286693, -0.4637885286135203], "greater", 26.0, 0.2668997668997669),
    (&[-0.2100065199611278, -0.9382518028281307, -0.7350025027943818, 0.5281143572287196, -0.5776452801683862, -0.18538034377620147, -0.22969496208598728, -0.4543161234163346, -1.1562800033102676, 0.6998708262344685, -0.4185541599123612, -0.7951959524364806, 1.3141012519156259, 0.917777524907175, -0.8122219764391825, 0.6253429958640778, 1.314286074257027, -2.2899848388871042, 0.744504424380018, -0.941292072274582, -0.2738518976748631, -0.4476049513464154, -1.2620263105800966, 0.8160181031219391, 0.6853699643106311, -0.1451931550125135, 0.16240850026067424, 0.3783262592856163, -0.03650144387033016, -1.405939987773839, 1.4907171386748455, 0.29588902533406986, -1.3659961238818714, -0.13752143264946554, 0.34924543182714307, 0.8776331491470881, -0.35445322069280627, 0.050854192305054696, -2.122281274844693, -1.0112551981156703], &[-0.27834264944728915, 0.8212635363824283, 0.20579677773005212, 0.24948066072757197, 0.2386785022895201, 0.7444856113018434, -0.2036323454580552, 1.9275526795559552, 0.6815779326804179, 0.36093141416742436, 1.9065931067817417, 0.6153513006692714, 0.045969859593355755, 1.4282913121771867, 2.041022009854916, 0.57418201501413, 0.8007284212733006, 1.5204078235433578, -0.5887318166182371, 0.5586130591448303, 0.44536682911137065, 0.5641164129737928, -0.6001478664684952, 1.2108278223235387, -0.5879507841118388, 0.6987098220121235, -0.1274681708453117, 1.8041079657111485, 0.29444092797910776, 1.2821395805801283, 0.6809130693055412, -0.0831786904659797, 0.787468029999926, -0.9027194895945838, 2.908002529969232, -0.7061368988897312, 1.0710264448536928, 0.12605193586110103, 0.2816818483529564, 1.7813977817174658, 1.4712152986903102, 0.19976220866914313, 0.7103795396606047, 0.7942129123870081, 0.051860027171184986], "less", 487.0, 0.00014069289220219728),
    (&[1.0728639422600834, 1.4260879191305589, 0.6490207309403282, 0.6000427744385043, -0.6742639821480293, 0.03027711330619116, 0.10639937631800021, 2.1600875077779613, -0.21298317137614145, 0.9081244807874255, 2.727351651654073, -0.7616404780845181, 0.47061915634993456, -1.1897363184838083, 0.7229515571962677, 0.6522497521524333, -1.4237478339409233, 1.8290726229210474, 2.142767719869114, -0.20407433988126072, 0.56539238006178, 0.6159053718126335, 0.32585685611287785, 0.7304269476368896, -0.1600109535606403, -1.307937284113629, 0.6902347084749778, -1.7106066675887825, -0.48072638489440617, 0.30406651174347327, 1.4889922371110016, -0.03261365553601781, 0.1189219782787613, 0.08944997581444789, -0.19197614214834532, 0.585589040902887, 0.34430349480040345, 0.1127193782845049, 0.3725271094474272, -0.7145753656556753, 0.5743002399489501, 0.5105912545919102, 0.8797961733423205, -0.24712003854629097, 1.0239155518557141, -0.12479553683767668, 0.5494196881778659, 0.6852356565723331, -0.37926308610573223, -0.025408055171710252, -1.1679861415251636, 0.7368068498402431, -1.423839951007567, 0.17347329772314124, -2.514734781314523, -1.5520403456158072, -1.4765896988287612, -0.22100174714046714, 0.1416176981676996, 0.7747824087894152], &[-2.0708520313901855, -1.6696005809892849, 0.4287322820728138, -1.0462241327119277, -1.5861290260644159, 0.3188812912218053, -2.181720942592969, 2.14068468732716, 1.3572474297793142, -0.10502817634647112, 1.2392396576978097, -0.17087634998894247, -1.64956674721456, 0.884210661597485, -0.09928582144237218, 1.6827775105312435, 0.344081750129482, 0.9496877822496743, -1.174792344422626, 0.05759069222089195, -1.1445114699773797, 1.4787336779939562, 1.0975343199707113, -1.1172692284828143, 0.7327451540896465, 2.801775472127581, 2.7172185673512166, -0.28601494088436175, 0.1949376805279643, 0.25228036019961503, -0.1572081689042141, -1.0070957123581046, -0.5383063702046038, -0.6117264713253953, -1.1452522962520741, 0.3395435744177334, -1.0713264657647812, -0.6633155607202863, -1.6005762245249484, 0.3949471628436392, 0.37847917090655087, 1.4415469172016044, -0.2326858424938464, -0.67746327917587, -0.2902805859169383, -0.5905242732788493, 2.617045629879712, 0.3601691358432424, 0.8341844661814358, 0.5890437571706695], "greater", 1627.0, 0.22381270131004372),
    (&[-0.9, -0.3, 0.2, -0.2, 0.0, 0.6, 0.0, -0.3, 0.7, -0.3, 1.1, -0.3, 0.5, 0.7, -1.9, -0.9, -1.7, -0.5, -2.9, -1.8, 0.4, 0.8, -0.2, 0.8, 0.4, 0.4, 1.0, 1.1, -0.1, -1.5], &[0.1, 1.7, 1.1, 0.7, 0.6, -1.0, 1.0, -1.0, 1.2, 1.0, 1.7, 1.8, 0.5, 0.1, -1.1, 0.4, -0.9, 1.2, 1.1, -1.1, 0.0, -0.2, 1.5, 0.6, -1.2, -0.2, 1.7, 0.7, 1.7, -0.7, 0.4, 0.9, 0.3, 0.3, 0.4], "less", 347.0, 0.009680928941013267),
    (&[2.7, -0.6, 1.6, 0.6, -0.2, 0.3, 0.9, 0.8, 0.1, 0.1, -0.0, 0.2, -0.1, -0.3, -0.2, 2.1, 1.4, -2.8, 0.6, 0.1, 0.3, 1.3, -0.4, -1.4, 0.6, 2.0], &[0.3, -0.8, -0.7, -1.3, 1.1, -0.4, 1.7, -0.7, -0.1, -0.1, 0.7, 0.3, -1.0, 0.3, -0.4, 0.6, 0.9, 0.6, 1.0, 1.3, -0.1, 0.8, -0.1, -0.3, -0.4, 0.4, -0.9, -0.5], "greater", 438.5, 0.09973991916338149),
];
